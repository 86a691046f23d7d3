"""Explicit witness constructions: sawtooth functions of arc length,
alternating separated-ball witnesses, and an inductive selector that forges a
unit-ball element on which a sequence of functionals diverges."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .curves import SampledCurve, arc_length_reparam, total_variation
from .errors import HorizonError, InputError
from .lipschitz import LipschitzSample, lip_constant
from .metric import MetricSpace


@dataclass(frozen=True)
class SawtoothSpec:
    tooth: float
    length: float

    def __post_init__(self):
        if self.tooth <= 0:
            raise InputError(f"tooth must be positive, got {self.tooth}")
        if self.tooth > self.length:
            raise InputError(f"tooth {self.tooth} exceeds curve length {self.length}")


@dataclass(frozen=True)
class WitnessFunction:
    """A realized Lipschitz sample plus the numeric properties certified for it."""

    realization: LipschitzSample
    certificates: dict

    def to_json(self) -> dict:
        return {"sample": self.realization.to_json(), "certificates": dict(self.certificates)}


def triangle_wave(t, tooth: float):
    """Continuous triangle wave: period 2*tooth, range [0, tooth], slope +-1,
    rising on [2k*tooth, (2k+1)*tooth] and falling on the next tooth."""
    if tooth <= 0:
        raise InputError(f"tooth must be positive, got {tooth}")
    r = np.mod(np.asarray(t, dtype=float), 2.0 * tooth)
    out = np.where(r <= tooth, r, 2.0 * tooth - r)
    return float(out) if np.isscalar(t) or out.ndim == 0 else out


def _chord_arc_defect(space: MetricSpace, samples: np.ndarray, s: np.ndarray,
                      block: int = 1024) -> float:
    """Max over sample pairs of (arc separation / distance) - 1, blockwise to
    keep memory bounded on long curves."""
    worst = 1.0
    m = len(samples)
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        rows = np.stack([space.dist_row(int(p), samples) for p in samples[lo:hi]])
        arcs = np.abs(s[lo:hi, None] - s[None, :])
        np.fill_diagonal(rows[:, lo:hi], 1.0)
        arcs_over_d = arcs / np.where(rows > 0, rows, np.inf)
        worst = max(worst, float(np.max(arcs_over_d)))
    return worst - 1.0


def sawtooth_witness(curve: SampledCurve, tooth: float) -> WitnessFunction:
    """Triangle wave of the arc-length coordinate, realized on the curve's
    samples.

    Certifies: sup bound by the tooth size, the realized Lipschitz constant
    (<= 1 + chord-arc defect), the variation of the post-composition over the
    finest grid, and the tooth-accounting floor (total variation minus twice
    the tooth)."""
    if not curve.is_simple():
        raise InputError("sawtooth witness requires a simple curve")
    tv = total_variation(curve)
    if tv <= 0:
        raise InputError("sawtooth witness requires positive total variation")
    SawtoothSpec(tooth=tooth, length=tv)

    s = curve.arc_coordinates()
    values = triangle_wave(s, tooth)
    eta = _chord_arc_defect(curve.space, curve.samples, s)
    lc = lip_constant(curve.samples, values, curve.space)
    realization = LipschitzSample(
        space=curve.space,
        support=tuple(int(i) for i in curve.samples),
        values=tuple(float(v) for v in values),
        L=max(1.0, lc),
    )
    variation = float(np.sum(np.abs(np.diff(values))))
    certificates = {
        "tooth": float(tooth),
        "total_variation": tv,
        "sup_abs": float(np.max(np.abs(values))),
        "lip_constant": lc,
        "chord_arc_defect": eta,
        "composed_variation": variation,
        "variation_floor": tv - 2.0 * tooth,
    }
    return WitnessFunction(realization=realization, certificates=certificates)


def variation_preserving_witness(curve: SampledCurve, slack: float) -> WitnessFunction:
    """Sawtooth witness with tooth = slack/2, targeting a post-composition
    variation of at least total_variation - slack with sup bound slack/2."""
    if slack <= 0:
        raise InputError(f"slack must be positive, got {slack}")
    witness = sawtooth_witness(curve, slack / 2.0)
    certs = dict(witness.certificates)
    certs["slack"] = float(slack)
    certs["variation_target"] = certs["total_variation"] - slack
    return WitnessFunction(realization=witness.realization, certificates=certs)


def alternating_separated_witness(space: MetricSpace, ordered_points: Sequence[int],
                                  radii: Sequence[float]) -> WitnessFunction:
    """Values (-1)^k * radius_k on points whose pairwise distances dominate
    the radius sums; 1-Lipschitz on its support by construction.

    Certifies the lower bound sum_k (radius_k + radius_{k+1}) on the variation
    of any post-composition along a curve visiting the points in order: the
    alternating signs make every adjacent jump equal the radius sum exactly.
    """
    pts = [space.check_id(p) for p in ordered_points]
    radii = np.asarray(radii, dtype=float)
    if len(pts) != len(radii):
        raise InputError(f"{len(pts)} points but {len(radii)} radii")
    if len(pts) == 0:
        raise InputError("empty point list")
    if np.any(radii <= 0):
        raise InputError("radii must be positive")
    if len(set(pts)) != len(pts):
        raise InputError("ordered points must be distinct")
    dmat = space.submatrix(pts)
    need = radii[:, None] + radii[None, :]
    np.fill_diagonal(need, 0.0)
    bad = np.argwhere(dmat < need)
    if len(bad):
        i, j = bad[0]
        raise InputError(
            f"separation precondition fails for pair ({pts[i]},{pts[j]}): "
            f"dist={dmat[i, j]!r} < radius sum {need[i, j]!r}"
        )
    ks = np.arange(1, len(pts) + 1)
    values = ((-1.0) ** ks) * radii
    realization = LipschitzSample(
        space=space, support=tuple(pts), values=tuple(float(v) for v in values), L=1.0
    )
    lower = float(np.sum(radii[:-1] + radii[1:])) if len(pts) > 1 else 0.0
    margin = float(np.min((dmat - need)[np.triu_indices(len(pts), k=1)])) if len(pts) > 1 else float("inf")
    certificates = {
        "variation_lower_bound": lower,
        "separation_margin": margin,
        "sup_abs": float(np.max(np.abs(values))),
    }
    return WitnessFunction(realization=realization, certificates=certificates)


# -- divergence forge ----------------------------------------------------------


@dataclass
class ForgeProblem:
    """A sequence of nonnegative, positively homogeneous, countably
    subadditive functionals p_m over combinations of unit-norm basis elements.

    ``functional(m, combo)`` evaluates p_m at sum_i alpha_i * z_{e_i}, where
    combo is a sequence of (element index, coefficient) pairs.  ``horizon``
    bounds the total number of functional evaluations per forge run.
    """

    functional: Callable[[int, Sequence[tuple[int, float]]], float]
    horizon: int = 10**6


@dataclass(frozen=True)
class ForgeResult:
    alphas: tuple[float, ...]
    indices: tuple[int, ...]
    level_bounds: tuple[float, ...]
    selection_slacks: tuple[dict, ...]


class _BudgetedFunctional:
    def __init__(self, problem: ForgeProblem, level_of: Callable[[], int]):
        self._f = problem.functional
        self._budget = problem.horizon
        self._calls = 0
        self._level_of = level_of

    def __call__(self, m: int, combo) -> float:
        if self._calls >= self._budget:
            raise HorizonError(
                f"functional-evaluation horizon exhausted at level {self._level_of()}",
                level=self._level_of(),
            )
        self._calls += 1
        v = float(self._f(m, combo))
        if v < 0:
            raise InputError(f"functional p_{m} returned a negative value {v!r}")
        return v


def banach_steinhaus_forge(problem: ForgeProblem, depth: int) -> ForgeResult:
    """Inductively pick coefficients alpha_j and indices m_j so that the
    partial sum of alpha_j * z_{m_j} makes the functionals grow without bound.

    Level initialization is alpha_1 = 1/2, m_1 = 1.  Every subsequent level j
    satisfies, with zero tolerance,

        max(alpha_{j+1}, alpha_{j+1} * p_{m_j}(z_{m_{j+1}})) <= 2**-j
        alpha_{j+1} * p_{m_{j+1}}(z_{m_{j+1}}) >= 3 * max(j, sum_i alpha_i * p_{m_j}(z_{m_i}))

    and the returned chain certificate p_{m_{j+1}}(partial sum) >= j is
    re-evaluated numerically on the final combination.  Index search is a
    linear scan; exhausting the evaluation horizon raises
    :class:`HorizonError` with the level reached.
    """
    if depth < 1:
        raise InputError(f"depth must be >= 1, got {depth}")
    state = {"level": 1}
    p = _BudgetedFunctional(problem, lambda: state["level"])

    def unit(m: int) -> float:
        return p(m, ((m, 1.0),))

    alphas = [0.5]
    indices = [1]
    slacks: list[dict] = []
    for j in range(1, depth):
        state["level"] = j
        m_j = indices[-1]
        combo_sum = sum(a * p(m_j, ((mi, 1.0),)) for a, mi in zip(alphas, indices))
        need = 3.0 * max(float(j), combo_sum)
        cap = 2.0 ** (-j)
        m = m_j + 1
        while True:
            growth = unit(m)
            cross = p(m_j, ((m, 1.0),))
            alpha = cap / max(1.0, cross)
            if alpha * growth >= need:
                break
            m += 1
        indices.append(m)
        alphas.append(alpha)
        slacks.append(
            {
                "level": j,
                "cap_inequality": cap - max(alpha, alpha * cross),
                "growth_inequality": alpha * growth - need,
            }
        )
        # Both selection inequalities must hold exactly, no tolerance.
        assert max(alpha, alpha * cross) <= cap
        assert alpha * growth >= need

    combo = tuple((m, a) for m, a in zip(indices, alphas))
    level_bounds = []
    for j in range(1, depth):
        value = p(indices[j], combo)
        if value < j:
            raise InputError(
                f"chain certificate failed at level {j}: p_m{indices[j]}(partial sum) = {value} < {j}; "
                "the functionals are likely not monotone enough in the index"
            )
        level_bounds.append(value)
    return ForgeResult(
        alphas=tuple(alphas),
        indices=tuple(indices),
        level_bounds=tuple(level_bounds),
        selection_slacks=tuple(slacks),
    )


def diagonal_forge_problem(weight: float = 1.0) -> ForgeProblem:
    """Toy problem p_m(z) = m * |z_m| on coefficient sequences with unit
    basis elements; p_m(z_m) = m > m - 1 and cross terms vanish."""

    def functional(m: int, combo) -> float:
        return weight * m * sum(abs(a) for e, a in combo if e == m)

    return ForgeProblem(functional=functional)
