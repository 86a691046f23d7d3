"""Numerical checkers for the structural identities and inequalities the
toolkit is built around: contraction of variation under Lipschitz maps, the
discrete area formula, the variation integral, discontinuity measures,
continuous-representative recovery, AC_p consistency, and a Luzin-N probe."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .curves import SampledCurve, hausdorff1_content, total_variation
from .errors import InputError, ScheduleError
from .lipschitz import LipschitzSample, mcshane_extend_all
from .metric import MetricSpace


@dataclass(frozen=True)
class CheckReport:
    """One verified (in)equality: ``lhs <= rhs + tolerance`` for one-sided
    checks, ``|lhs - rhs| <= tolerance`` for identities."""

    name: str
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    verdict: bool
    context: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "verdict": "pass" if self.verdict else "fail",
            "context": dict(self.context),
        }


def _report(name, lhs, rhs, tolerance, one_sided, context=None) -> CheckReport:
    residual = max(0.0, lhs - rhs) if one_sided else abs(lhs - rhs)
    return CheckReport(
        name=name,
        lhs=float(lhs),
        rhs=float(rhs),
        residual=float(residual),
        tolerance=float(tolerance),
        verdict=bool(residual <= tolerance),
        context=dict(context or {}),
    )


def check_contraction(curve: SampledCurve, sample: LipschitzSample) -> CheckReport:
    """Variation of an L-Lipschitz function along the curve is at most
    L times the curve's variation."""
    if sample.space is not curve.space and sample.space.n != curve.space.n:
        raise InputError("Lipschitz sample and curve live on different spaces")
    values = mcshane_extend_all(sample, curve.samples)
    lhs = float(np.sum(np.abs(np.diff(values))))
    tv = total_variation(curve)
    rhs = sample.L * tv
    tol = 1e-12 * max(1.0, abs(rhs))
    return _report(
        "contraction", lhs, rhs, tol, one_sided=True,
        context={"L": sample.L, "total_variation": tv},
    )


def area_formula_check(curve: SampledCurve, values: Sequence[float],
                       weights: Optional[Sequence[float]] = None) -> CheckReport:
    """Discrete area formula: summing step weights against increments of a
    real-valued trace equals sweeping the level line and counting weighted
    crossings of each elementary level interval."""
    h = np.asarray(values, dtype=float)
    if len(h) != len(curve.samples):
        raise InputError(f"{len(h)} values for {len(curve.samples)} samples")
    if weights is None:
        theta = np.ones(len(h))
    else:
        theta = np.asarray(weights, dtype=float)
        if len(theta) != len(h):
            raise InputError(f"{len(theta)} weights for {len(h)} values")
    theta_bar = 0.5 * (theta[:-1] + theta[1:])
    lhs = float(np.sum(theta_bar * np.abs(np.diff(h))))

    levels = np.unique(h)
    rhs = 0.0
    lo = np.minimum(h[:-1], h[1:])
    hi = np.maximum(h[:-1], h[1:])
    for a, b in zip(levels[:-1], levels[1:]):
        crossing = (lo <= a) & (hi >= b)
        rhs += (b - a) * float(np.sum(theta_bar[crossing]))
    tol = 1e-6 * max(1.0, abs(rhs))
    return _report("area_formula", lhs, rhs, tol, one_sided=False,
                   context={"levels": len(levels)})


def variation_integral_check(curve: SampledCurve) -> CheckReport:
    """Variation equals chord length weighted by traversal multiplicity,
    summed over the distinct unordered geometric edges of the sample path.
    An identity by construction; reported to confirm the bookkeeping."""
    lhs = total_variation(curve)
    edges: dict[tuple[int, int], int] = {}
    for a, b in zip(curve.samples[:-1], curve.samples[1:]):
        key = (min(int(a), int(b)), max(int(a), int(b)))
        edges[key] = edges.get(key, 0) + 1
    rhs = sum(mult * curve.space.dist(a, b) for (a, b), mult in edges.items())
    tol = 1e-6 * max(1.0, abs(rhs))
    return _report("variation_integral", lhs, rhs, tol, one_sided=False,
                   context={"distinct_edges": len(edges), "simple": curve.is_simple()})


@dataclass(frozen=True)
class DiscontinuityProfile:
    epsilon: float
    delta: float
    pair_count: int
    measure: float


def discontinuity_measure(values: Sequence[float], epsilon: float, delta: float,
                          times: Optional[Sequence[float]] = None) -> DiscontinuityProfile:
    """Plane measure of the near-diagonal pairs (s, t) with |s - t| < delta
    whose values differ by at least epsilon, estimated as (pair count) times
    the grid cell area.  A function continuous at scale (epsilon, delta) gives
    zero; an interior jump of size >= epsilon gives about delta**2."""
    v = np.asarray(values, dtype=float)
    if epsilon <= 0 or delta <= 0:
        raise InputError("epsilon and delta must be positive")
    if times is None:
        t = np.linspace(0.0, 1.0, len(v))
    else:
        t = np.asarray(times, dtype=float)
        if len(t) != len(v):
            raise InputError(f"{len(t)} times for {len(v)} values")
    if len(v) < 2:
        raise InputError("need at least two samples")
    dt = float(np.mean(np.diff(t)))
    count = 0
    # Count ordered pairs by sliding offset; offsets beyond delta/dt cannot
    # contribute.
    max_off = int(math.ceil(delta / dt)) + 1
    for off in range(1, min(max_off, len(v))):
        close = np.abs(t[off:] - t[:-off]) < delta
        jump = np.abs(v[off:] - v[:-off]) >= epsilon
        count += 2 * int(np.sum(close & jump))
    return DiscontinuityProfile(
        epsilon=float(epsilon), delta=float(delta),
        pair_count=count, measure=count * dt * dt,
    )


def continuous_representative(values: Sequence[float],
                              epsilon_schedule: Sequence[float],
                              window: int = 5) -> Optional[tuple[np.ndarray, float]]:
    """Recover a continuous representative by replacing isolated deviants with
    the median of the locally dominant value cluster, sweeping a decreasing
    epsilon schedule.  Returns the cleaned trace and the fraction of samples
    modified, or None when the residual discontinuity measure still exceeds
    one grid cell (no continuous representative at the requested scales)."""
    v = np.array(values, dtype=float)
    sched = [float(e) for e in epsilon_schedule]
    if not sched or any(e <= 0 for e in sched):
        raise ScheduleError(f"epsilon schedule must be nonempty and positive: {sched}")
    if any(b >= a for a, b in zip(sched[:-1], sched[1:])):
        raise ScheduleError(f"epsilon schedule must be strictly decreasing: {sched}")
    if window < 3:
        raise ScheduleError(f"window must span at least 3 samples, got {window}")
    if len(v) < window:
        raise ScheduleError(f"trace of {len(v)} samples is shorter than window {window}")
    n = len(v)
    modified = np.zeros(n, dtype=bool)
    for eps in sched:
        for i in range(n):
            lo, hi = max(0, i - window), min(n, i + window + 1)
            nbhd = v[lo:hi]
            close = np.abs(nbhd - v[i]) < eps
            # Majority cluster of the window disagrees with v[i]: replace.
            far = ~close
            if np.sum(far) > len(nbhd) / 2.0:
                v[i] = float(np.median(nbhd[far]))
                modified[i] = True
    dt = 1.0 / (n - 1)
    residual = discontinuity_measure(v, sched[-1], max(2.5 * dt, 2.0 * dt))
    if residual.measure > dt * dt:
        return None
    return v, float(np.mean(modified))


@dataclass(frozen=True)
class ACPReport:
    p: float
    norm_estimate: float
    refinement_trend: tuple[float, ...]
    verdict: str  # "AC_p-consistent" | "AC_p-inconsistent" | "inconclusive"


def _speed_norm(curve: SampledCurve, p: float) -> float:
    q = curve.step_quotients()
    if math.isinf(p):
        return float(np.max(q)) if len(q) else 0.0
    dt = np.diff(curve.times)
    return float(np.sum((q ** p) * dt) ** (1.0 / p))


def ac_p_test(curve: SampledCurve, p: float,
              refine: Optional[Callable[[SampledCurve], SampledCurve]] = None,
              refinements: int = 1, stability_rtol: float = 0.05) -> ACPReport:
    """Estimate the L^p norm of the metric speed and test its stability under
    grid refinement.  A curve that is absolutely continuous with p-integrable
    speed has a stable norm; an unbounded-speed curve (like a square-root cusp
    at p >= 2) shows a growing trend and is reported inconsistent."""
    if p < 1:
        raise InputError(f"p must be >= 1, got {p}")
    trend = [_speed_norm(curve, p)]
    if refine is None or refinements < 1:
        return ACPReport(p=float(p), norm_estimate=trend[0],
                         refinement_trend=tuple(trend), verdict="inconclusive")
    c = curve
    for _ in range(refinements):
        c = refine(c)
        trend.append(_speed_norm(c, p))
    rels = [abs(b - a) / max(abs(a), 1e-300) for a, b in zip(trend[:-1], trend[1:])]
    verdict = "AC_p-consistent" if max(rels) <= stability_rtol else "AC_p-inconsistent"
    return ACPReport(p=float(p), norm_estimate=trend[-1],
                     refinement_trend=tuple(trend), verdict=verdict)


def luzin_n_probe(curve: SampledCurve, null_set: Sequence[tuple[float, float]],
                  delta: float) -> CheckReport:
    """Luzin-N style probe: the length content created by the part of the
    curve parametrized over a small time set is controlled by the worst step
    quotient seen outside that set, times the set's total length.  A curve that tears a time-null
    set into positive length fails."""
    if delta <= 0:
        raise InputError(f"delta must be positive, got {delta}")
    intervals = [(float(a), float(b)) for a, b in null_set]
    for a, b in intervals:
        if b <= a:
            raise InputError(f"degenerate interval ({a}, {b})")
    mask = np.zeros(len(curve.times), dtype=bool)
    for a, b in intervals:
        mask |= (curve.times >= a) & (curve.times <= b)
    ids = curve.samples[mask]
    if len(ids) == 0:
        return _report("luzin_n", 0.0, 0.0, delta, one_sided=True,
                       context={"null_set_samples": 0})
    content = hausdorff1_content(curve.space, ids, delta)
    step_mask = mask[:-1] & mask[1:]
    within = float(np.sum(curve.chords()[step_mask]))
    lhs = max(content, within)
    length = sum(b - a for a, b in intervals)
    # Estimate the Lipschitz behavior from the steps outside the null set; a
    # jump hidden inside the set must not inflate its own budget.
    q = curve.step_quotients()
    outside = q[~step_mask]
    rhs = (float(np.max(outside)) if len(outside) else
           float(np.max(q)) if len(q) else 0.0) * length
    return _report(
        "luzin_n", lhs, rhs, max(delta, 1e-12), one_sided=True,
        context={"null_set_samples": int(len(ids)), "content": content,
                 "within_variation": within, "set_length": length},
    )
