"""Batch front-end: ``symproj run job.json [--oracle] [--dump-matrices DIR] [--tolerance T]``.

A job names a source of operators (a built-in model or operator files) and
a list of projector requests.  The JSON report lists, per request, the
sector dimension, residuals, convergence and triviality flags and, when a
Hamiltonian is available, the lowest eigenvalue of ``P H P`` in the sector.
The exit status is 1 when any request failed to converge, 2 when the job
does not validate.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import models
from . import projector as proj
from ._jsonfmt import dumps
from .analysis import lowest_sector_energy
from .core import Operator, load_operator, save_operator, spectral_projector_oracle

__all__ = ["JobValidationError", "JobSpec", "load_job", "run_job", "main"]

SPECTRAL = ("lagrange", "fourier_equidistant", "cyclic_quadrature", "riesz")
CONSTRUCTORS = SPECTRAL + ("angular_momentum", "group_character", "composite")
MODELS = {
    "spins": {"n_sites": int},
    "heisenberg": {"n": int, "J": float, "periodic": bool},
    "fermions": {"n_modes": int},
    "hubbard": {"n_sites": int, "t": float, "U": float},
}
GROUPS = ("S3", "Z2", "translation")


class JobValidationError(ValueError):
    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("invalid job spec:\n  " + "\n  ".join(errors))


@dataclass
class JobSpec:
    source: dict
    requests: list
    outputs: dict
    base_dir: Path


def _is_num(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _is_posint(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x > 0


# -- operators from the source -----------------------------------------------

def build_operators(source: dict, base_dir: Path) -> tuple[dict[str, Operator], str | None, dict]:
    """Return named operators, the Hamiltonian name (or None), and model metadata."""
    if "model" in source:
        name = source["model"]
        params = dict(source.get("params", {}))
        if name == "spins":
            n = params["n_sites"]
            sx, sy, sz, s2 = models.total_spin_operators(n)
            return {"Sx": sx, "Sy": sy, "Sz": sz, "S2": s2}, None, {"spin_sites": n}
        if name == "heisenberg":
            n = params["n"]
            sx, sy, sz, s2 = models.total_spin_operators(n)
            h = models.heisenberg_chain(n, params.get("J", 1.0), params.get("periodic", False))
            return {"H": h, "Sx": sx, "Sy": sy, "Sz": sz, "S2": s2}, "H", {"spin_sites": n}
        if name == "fermions":
            return {"N": models.number_operator(params["n_modes"])}, None, {}
        if name == "hubbard":
            n = params["n_sites"]
            h = models.hubbard_model(n, params.get("t", 1.0), params.get("U", 4.0))
            sx, sy, sz, s2 = models.hubbard_spin_operators(n)
            num = models.number_operator(2 * n)
            return {"H": h, "N": num, "Sx": sx, "Sy": sy, "Sz": sz, "S2": s2}, "H", {}
    ops = {k: load_operator(base_dir / v) for k, v in source["operators"].items()}
    return ops, source.get("hamiltonian"), {}


def _group_rep(group: str, meta: dict) -> proj.GroupRep:
    n = meta["spin_sites"]
    if group == "S3":
        return proj.s3_permutation_rep()
    if group == "Z2":
        return proj.cyclic_group_rep(models.spin_flip(n), 2)
    shift = models.site_permutation([(i + 1) % n for i in range(n)], n)
    return proj.cyclic_group_rep(shift, n)


# -- validation --------------------------------------------------------------

def _validate_source(src, errors: list[str], base_dir: Path) -> tuple[set[str], dict]:
    if not isinstance(src, dict):
        errors.append("source: must be an object")
        return set(), {}
    if "model" in src:
        model = src["model"]
        if model not in MODELS:
            errors.append(f"source.model: unknown model {model!r}; expected one of {sorted(MODELS)}")
            return set(), {}
        params = src.get("params", {})
        if not isinstance(params, dict):
            errors.append("source.params: must be an object")
            return set(), {}
        schema = MODELS[model]
        for key, val in params.items():
            if key not in schema:
                errors.append(f"source.params.{key}: unknown parameter for model {model!r}")
            elif schema[key] is int and not _is_posint(val):
                errors.append(f"source.params.{key}: must be a positive integer")
            elif schema[key] is float and not _is_num(val):
                errors.append(f"source.params.{key}: must be a finite number")
            elif schema[key] is bool and not isinstance(val, bool):
                errors.append(f"source.params.{key}: must be true or false")
        required = {"spins": "n_sites", "heisenberg": "n", "fermions": "n_modes", "hubbard": "n_sites"}[model]
        if required not in params:
            errors.append(f"source.params.{required}: required for model {model!r}")
            return set(), {}
        size = params[required]
        limits = {"spins": (1, 12), "heisenberg": (2, 12), "fermions": (1, 12), "hubbard": (1, 4)}[model]
        if _is_posint(size) and not limits[0] <= size <= limits[1]:
            errors.append(f"source.params.{required}: must be in [{limits[0]}, {limits[1]}]")
        names = {"spins": {"Sx", "Sy", "Sz", "S2"},
                 "heisenberg": {"H", "Sx", "Sy", "Sz", "S2"},
                 "fermions": {"N"},
                 "hubbard": {"H", "N", "Sx", "Sy", "Sz", "S2"}}[model]
        meta = {"spin_sites": size} if model in ("spins", "heisenberg") else {}
        return names, meta
    if "operators" in src:
        ops = src["operators"]
        if not isinstance(ops, dict) or not ops:
            errors.append("source.operators: must be a non-empty object of name -> file")
            return set(), {}
        for k, v in ops.items():
            if not isinstance(v, str):
                errors.append(f"source.operators.{k}: must be a file path")
            elif not (base_dir / v).is_file():
                errors.append(f"source.operators.{k}: file {v!r} not found")
        ham = src.get("hamiltonian")
        if ham is not None and ham not in ops:
            errors.append(f"source.hamiltonian: {ham!r} is not one of the operators")
        return set(ops), {}
    errors.append("source: needs either 'model' or 'operators'")
    return set(), {}


def _validate_request(req, where: str, names: set[str], meta: dict, errors: list[str],
                      nested: bool = False) -> None:
    if not isinstance(req, dict):
        errors.append(f"{where}: must be an object")
        return
    cons = req.get("constructor")
    if cons not in CONSTRUCTORS:
        errors.append(f"{where}.constructor: must be one of {list(CONSTRUCTORS)}, got {cons!r}")
        return
    params = req.get("params", {})
    if not isinstance(params, dict):
        errors.append(f"{where}.params: must be an object")
        return
    if cons == "composite":
        if nested:
            errors.append(f"{where}: composite requests cannot be nested")
            return
        parts = req.get("parts")
        if not isinstance(parts, list) or not parts:
            errors.append(f"{where}.parts: must be a non-empty list of requests")
            return
        for i, part in enumerate(parts):
            _validate_request(part, f"{where}.parts[{i}]", names, meta, errors, nested=True)
        return
    if cons == "group_character":
        group = req.get("group")
        if group not in GROUPS:
            errors.append(f"{where}.group: must be one of {list(GROUPS)}")
            return
        if "spin_sites" not in meta:
            errors.append(f"{where}.group: group projectors need a spin model source")
            return
        n = meta["spin_sites"]
        if group == "S3" and n != 3:
            errors.append(f"{where}.group: S3 acts on exactly 3 spin sites, model has {n}")
        if group == "translation" and not 2 <= n <= 8:
            errors.append(f"{where}.group: translation group needs 2..8 sites")
        if not isinstance(req.get("irrep"), str):
            errors.append(f"{where}.irrep: must be an irrep label")
        return
    op = req.get("operator", "Sy" if cons == "angular_momentum" else None)
    if op not in names:
        errors.append(f"{where}.operator: {op!r} does not name a built operator {sorted(names)}")
    if cons == "angular_momentum":
        for key in ("j", "m"):
            v = params.get(key)
            if not _is_num(v) or abs(2 * v - round(2 * v)) > 1e-12:
                errors.append(f"{where}.params.{key}: must be an integer or half-integer")
        if _is_num(params.get("j")) and _is_num(params.get("m")):
            j, m = params["j"], params["m"]
            if j < 0 or abs(m) > j or abs((j - m) - round(j - m)) > 1e-12:
                errors.append(f"{where}.params: invalid (j, m) = ({j}, {m})")
        nodes = params.get("nodes", 32)
        if not _is_posint(nodes) or nodes < 16:
            errors.append(f"{where}.params.nodes: must be an integer >= 16")
        for key, default in (("jz_operator", "Sz"), ("casimir_operator", "S2")):
            if params.get(key, default) not in names:
                errors.append(f"{where}.params.{key}: {params.get(key, default)!r} is not a built operator")
        return
    if not _is_num(req.get("target")):
        errors.append(f"{where}.target: must be a finite number")
    if cons == "lagrange" or cons == "riesz":
        spec = params.get("spectrum")
        if spec is not None and (not isinstance(spec, list) or not all(_is_num(v) for v in spec)):
            errors.append(f"{where}.params.spectrum: must be a list of numbers")
    if cons == "fourier_equidistant":
        if not (_is_num(params.get("d")) and params["d"] > 0):
            errors.append(f"{where}.params.d: must be a positive number")
        if not _is_posint(params.get("M")):
            errors.append(f"{where}.params.M: must be a positive integer")
    if cons == "cyclic_quadrature":
        if not _is_posint(params.get("M")):
            errors.append(f"{where}.params.M: must be a positive integer")
        if not (_is_num(params.get("rescale", 1.0)) and params.get("rescale", 1.0) > 0):
            errors.append(f"{where}.params.rescale: must be a positive number")
    if cons == "riesz":
        r = params.get("radius")
        if r is not None and not (_is_num(r) and r > 0):
            errors.append(f"{where}.params.radius: must be a positive number")
        if not _is_posint(params.get("nodes", 64)):
            errors.append(f"{where}.params.nodes: must be a positive integer")


def validate_job(data: Any, base_dir: Path) -> JobSpec:
    """Check a parsed job document; raises :class:`JobValidationError` listing every problem."""
    errors: list[str] = []
    if not isinstance(data, dict):
        raise JobValidationError(["job: must be a JSON object"])
    for key in data:
        if key not in ("source", "requests", "outputs"):
            errors.append(f"{key}: unknown top-level field")
    names, meta = _validate_source(data.get("source"), errors, base_dir)
    reqs = data.get("requests")
    if not isinstance(reqs, list) or not reqs:
        errors.append("requests: must be a non-empty list")
        reqs = []
    for i, req in enumerate(reqs):
        _validate_request(req, f"requests[{i}]", names, meta, errors)
    outputs = data.get("outputs", {})
    if not isinstance(outputs, dict):
        errors.append("outputs: must be an object")
        outputs = {}
    if errors:
        raise JobValidationError(errors)
    return JobSpec(data["source"], reqs, outputs, base_dir)


def load_job(path) -> JobSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise JobValidationError([f"job: not valid JSON ({exc})"]) from None
    return validate_job(data, path.parent)


# -- execution ---------------------------------------------------------------

def _build_single(req: dict, ops: dict, meta: dict, tol: float) -> proj.ProjectorReport:
    cons = req["constructor"]
    params = req.get("params", {})
    if cons == "group_character":
        return proj.finite_group_projector(_group_rep(req["group"], meta), req["irrep"], tol=tol)
    if cons == "angular_momentum":
        jz = ops[params.get("jz_operator", "Sz")]
        pm = proj.lagrange_projector(jz, target=params["m"], tol=tol)
        return proj.angular_momentum_projector(ops[req.get("operator", "Sy")], params["j"],
                                               params["m"], params.get("nodes", 32),
                                               jz_projector=pm.matrix, tol=tol)
    o = ops[req["operator"]]
    t = float(req["target"])
    if cons == "lagrange":
        return proj.lagrange_projector(o, params.get("spectrum"), target=t, tol=tol)
    if cons == "fourier_equidistant":
        return proj.equidistant_fourier_projector(o, t, params["d"], params["M"], tol=tol)
    if cons == "cyclic_quadrature":
        return proj.cyclic_quadrature_projector(o, t, params["M"], params.get("rescale", 1.0), tol=tol)
    return proj.riesz_projector(o, t, params.get("radius"), params.get("nodes", 64),
                                params.get("spectrum"), tol=tol)


def _oracle_single(req: dict, ops: dict) -> np.ndarray | None:
    cons = req["constructor"]
    params = req.get("params", {})
    if cons == "group_character":
        return None
    if cons == "angular_momentum":
        j, m = params["j"], params["m"]
        cas = spectral_projector_oracle(ops[params.get("casimir_operator", "S2")], j * (j + 1))
        jz = spectral_projector_oracle(ops[params.get("jz_operator", "Sz")], m)
        return np.asarray(cas) @ np.asarray(jz)
    return np.asarray(spectral_projector_oracle(ops[req["operator"]], float(req["target"])))


def _describe(req: dict) -> dict:
    cons = req["constructor"]
    if cons == "composite":
        return {"parts": [_describe(p) for p in req["parts"]]}
    if cons == "group_character":
        return {"group": req["group"], "irrep": req["irrep"]}
    if cons == "angular_momentum":
        p = req.get("params", {})
        return {"operator": req.get("operator", "Sy"), "j": float(p["j"]), "m": float(p["m"])}
    return {"operator": req["operator"], "target": float(req["target"])}


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.=-]+", "_", text).strip("_") or "projector"


def run_job(spec: JobSpec, oracle: bool = False, dump_dir=None,
            tolerance: float = proj.CONVERGENCE_TOL) -> tuple[dict, int]:
    """Execute every request in order; return the report and the exit status."""
    ops, ham_name, meta = build_operators(spec.source, spec.base_dir)
    dim = next(iter(ops.values())).dim
    ham = ops.get(ham_name) if ham_name else None
    entries = []
    failed = 0
    sector_sum = 0
    for i, req in enumerate(spec.requests):
        label = req.get("label", f"request{i}")
        entry: dict[str, Any] = {"label": label, "constructor": req["constructor"]}
        entry.update(_describe(req))
        try:
            if req["constructor"] == "composite":
                parts = [_build_single(p, ops, meta, tolerance) for p in req["parts"]]
                bad = [k for k, p in enumerate(parts) if not p.converged]
                if bad:
                    raise ValueError(f"parts {bad} did not converge")
                report = proj.composite_projector([p.matrix for p in parts], tol=tolerance)
                ref = None
                if oracle:
                    ref_parts = [_oracle_single(p, ops) for p in req["parts"]]
                    if all(r is not None for r in ref_parts):
                        ref = ref_parts[0]
                        for r in ref_parts[1:]:
                            ref = ref @ r
            else:
                report = _build_single(req, ops, meta, tolerance)
                ref = _oracle_single(req, ops) if oracle else None
        except (ValueError, KeyError, IndexError) as exc:
            entry.update({"method": None, "converged": False, "error": str(exc)})
            entries.append(entry)
            failed += 1
            continue
        entry.update({
            "method": report.method,
            "trace": report.trace,
            "sector_dimension": report.rank,
            "idempotency_residual": report.idempotency_residual,
            "hermiticity_residual": report.hermiticity_residual,
            "commutator_residual": report.commutator_residual,
            "eigen_residual": report.eigen_residual,
            "converged": report.converged,
            "trivial": report.trivial,
            "spectrum_source": report.spectrum_source,
            "lowest_sector_energy": lowest_sector_energy(report.matrix, ham) if ham is not None else None,
            "notes": list(report.notes),
        })
        if oracle:
            entry["oracle_deviation"] = (
                float(np.linalg.norm(np.asarray(report.matrix) - ref)) if ref is not None else None
            )
        if dump_dir is not None:
            fname = f"{i:02d}_{_slug(label)}.json"
            save_operator(Path(dump_dir) / fname, report.matrix)
            entry["matrix_file"] = fname
        if not report.converged:
            failed += 1
        else:
            sector_sum += report.rank
        entries.append(entry)
    result = {
        "source": spec.source,
        "dim": dim,
        "tolerance": tolerance,
        "oracle": oracle,
        "requests": entries,
        "summary": {
            "n_requests": len(entries),
            "n_failed": failed,
            "sector_dimension_sum": sector_sum,
        },
    }
    return result, (1 if failed else 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symproj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a JSON job spec")
    run.add_argument("spec", help="path to the job spec (JSON)")
    run.add_argument("--oracle", action="store_true",
                     help="compare every projector with the diagonalization oracle")
    run.add_argument("--dump-matrices", metavar="DIR", help="write projector matrices to DIR")
    run.add_argument("--tolerance", type=float, default=proj.CONVERGENCE_TOL,
                     help="residual threshold for convergence (default %(default)g)")
    run.add_argument("-o", "--output", help="report path (overrides outputs.report; '-' for stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not (args.tolerance > 0 and math.isfinite(args.tolerance)):
        print("error: --tolerance must be a positive number", file=sys.stderr)
        return 2
    try:
        spec = load_job(args.spec)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except JobValidationError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    dump_dir = None
    if args.dump_matrices:
        dump_dir = Path(args.dump_matrices)
        dump_dir.mkdir(parents=True, exist_ok=True)
    report, status = run_job(spec, oracle=args.oracle, dump_dir=dump_dir, tolerance=args.tolerance)
    text = dumps(report) + "\n"
    out = args.output or spec.outputs.get("report")
    if out and out != "-":
        out_path = Path(out) if args.output else spec.base_dir / out
        out_path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
