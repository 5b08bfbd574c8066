"""Scalar Kronecker-delta representations ``F(x, target)``.

Six forms are provided.  Forms 1-4 have operator-valued counterparts in
:mod:`symproj.projector`; forms 5 and 6 are scalar only, since their
definitions branch on the value of ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .core import SpectrumSpec

__all__ = ["KINDS", "IndicatorForm", "indicator_value", "rescaled_offsets"]

KINDS = (
    "unit_circle_real",
    "unit_circle_complex",
    "lagrange",
    "resolvent_contour",
    "logistic_difference",
    "bump",
)

INTEGER_TOL = 1e-9


@dataclass(frozen=True)
class IndicatorForm:
    """Selects one indicator form and its parameters.

    Parameters left as ``None`` are derived from the spectrum at evaluation
    time: ``nodes`` for the unit-circle forms defaults to the integer spread
    plus one, ``epsilon`` to half the smallest gap next to the target (its
    square for the bump), ``radius`` to that same half-gap.
    """

    kind: str
    nodes: int | None = None
    steepness: float | None = None
    epsilon: float | None = None
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown indicator kind {self.kind!r}; expected one of {KINDS}")
        if self.nodes is not None and self.nodes < 1:
            raise ValueError("nodes must be positive")
        for name in ("steepness", "epsilon", "radius"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.kind == "logistic_difference" and self.steepness is None:
            raise ValueError("logistic_difference needs a finite steepness k")


def _half_gap(spectrum: SpectrumSpec, j: int) -> float:
    vals = spectrum.values
    gaps = [vals[j] - vals[j - 1]] if j > 0 else []
    if j + 1 < len(vals):
        gaps.append(vals[j + 1] - vals[j])
    return min(gaps) / 2 if gaps else 0.5


def rescaled_offsets(spectrum: SpectrumSpec, target: float, d: float) -> np.ndarray:
    """Integer offsets ``(o_n - target)/d``; raises if any is not an integer."""
    raw = (np.asarray(spectrum.values) - target) / d
    rounded = np.rint(raw)
    bad = np.abs(raw - rounded) > INTEGER_TOL
    if np.any(bad):
        k = int(np.argmax(bad))
        raise ValueError(
            f"spectrum value {spectrum.values[k]!r} is offset {raw[k]!r} spacings from the "
            f"target; unit-circle forms need integer offsets (spacing {d!r})"
        )
    return rounded.astype(int)


def _unit_circle_setup(form, spectrum, target):
    if spectrum.spacing is not None:
        d = spectrum.spacing
    elif len(spectrum) > 1:
        d = min(np.diff(spectrum.values))
    else:
        d = 1.0
    offsets = rescaled_offsets(spectrum, target, d)
    spread = int(offsets.max() - offsets.min())
    m = form.nodes if form.nodes is not None else spread + 1
    if m <= spread:
        raise ValueError(f"{m} nodes cannot resolve an integer spread of {spread}")
    return d, m


def indicator_value(form: IndicatorForm, x: float, target: float, spectrum: SpectrumSpec):
    """Evaluate ``F(x, target)`` for the chosen form.

    Returns a complex number for the unit-circle forms and a float otherwise.
    """
    j = spectrum.index_of(target)
    target = spectrum.values[j]
    x = float(x)
    kind = form.kind

    if kind == "unit_circle_real":
        d, m = _unit_circle_setup(form, spectrum, target)
        phi = 2 * np.pi * np.arange(m) / m
        return complex(np.mean(np.exp(1j * phi * (x - target) / d)))

    if kind == "unit_circle_complex":
        # (1/2 pi i) * contour integral of z**((x - t)/d - 1) over |z| = 1, principal branch
        d, m = _unit_circle_setup(form, spectrum, target)
        z = np.exp(2j * np.pi * np.arange(m) / m)
        dz = 1j * z * (2 * np.pi / m)
        return complex(np.sum(z ** ((x - target) / d - 1) * dz) / (2j * np.pi))

    if kind == "lagrange":
        val = 1.0
        for n, o in enumerate(spectrum.values):
            if n != j:
                val *= (x - o) / (target - o)
        return float(val)

    if kind == "resolvent_contour":
        r = form.radius if form.radius is not None else _half_gap(spectrum, j)
        if abs(abs(x - target) - r) <= 1e-12 * max(1.0, r):
            raise ValueError(f"x = {x!r} lies on the contour of radius {r!r}")
        m = form.nodes if form.nodes is not None else 64
        w = r * np.exp(2j * np.pi * np.arange(m) / m)
        # (1/2 pi i) sum dz/(z - x) with z = t + w, dz = i w dtheta
        val = np.mean(w / (target + w - x))
        return float(val.real)

    if kind == "logistic_difference":
        eps = form.epsilon if form.epsilon is not None else _half_gap(spectrum, j)
        k = form.steepness
        return float(expit(k * (x - target + eps)) - expit(k * (x - target - eps)))

    # bump, rescaled so that F(target) = 1
    eps = form.epsilon if form.epsilon is not None else _half_gap(spectrum, j) ** 2
    u = (x - target) ** 2
    if u >= eps:
        return 0.0
    return float(math.exp(1.0 / (u - eps) + 1.0 / eps))
