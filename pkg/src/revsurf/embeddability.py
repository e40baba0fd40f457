"""Embeddability of the profile metric in Euclidean 3-space.

Three equivalent decisive criteria are checked and cross-asserted:

    derivative  sup |a'| <= 1 on [0, L]
    disk        every pole-centered disk has nonnegative total curvature
    latitude    every latitude circle has |total geodesic curvature| <= 2*pi

plus two one-sided screens: negative curvature at a pole obstructs
embedding, and K >= 0 everywhere suffices for it. The derivative
criterion is the designated ground truth; the others are exact algebraic
consequences (disk integral = 1 -+ a', latitude total = 2*pi*a'), so any
disagreement beyond tolerance signals a numerical bug and raises, it is
never reported as a verdict.

All criteria are invariant under homothety, so verdicts do not depend on
any area normalization.
"""

import json
from dataclasses import dataclass

import numpy as np

from ._search import golden_max, golden_min
from .curvature import (
    TWO_PI, disk_integral_closed, gauss_curvature, gauss_curvature_grid,
    latitude_geodesic_curvature_total,
)
from .errors import CriteriaInconsistencyError
from .profile import REFINE_WIDTH_FRACTION

__all__ = [
    "EMBEDDABLE", "NOT_EMBEDDABLE", "INCONCLUSIVE",
    "CriterionResult", "EmbeddabilityReport",
    "check_derivative", "check_disk", "check_latitude",
    "check_pole_obstruction", "check_nonneg_curvature", "full_report",
]

EMBEDDABLE = "embeddable"
NOT_EMBEDDABLE = "not_embeddable"
INCONCLUSIVE = "inconclusive"

DEFAULT_GRID_N = 4096
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of a single criterion with its witness and signed margin
    (positive = away from rejection)."""

    criterion: str
    verdict: str
    witness_s: float
    witness_value: float
    margin: float


@dataclass(frozen=True)
class EmbeddabilityReport:
    verdict: str
    sup_a_prime: float
    sup_a_prime_s: float
    criteria: tuple
    pole_np: float
    pole_sp: float
    grid_n: int
    tol: float
    notes: tuple = ()

    def to_json_dict(self):
        """CLI-facing JSON schema; field names are part of the contract."""
        return {
            "verdict": self.verdict,
            "sup_a_prime": {"value": self.sup_a_prime, "at_s": self.sup_a_prime_s},
            "criteria": [
                {
                    "name": c.criterion,
                    "verdict": c.verdict,
                    "witness_s": c.witness_s,
                    "witness_value": c.witness_value,
                    "margin": c.margin,
                }
                for c in self.criteria
            ],
            "pole_curvature": {"np": self.pole_np, "sp": self.pole_sp},
            "grid_n": self.grid_n,
            "tol": self.tol,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_json_dict(), indent=indent)

    def summary_lines(self):
        lines = [f"verdict: {self.verdict}",
                 f"sup |a'| = {self.sup_a_prime:.10g} at s = {self.sup_a_prime_s:.10g}",
                 f"pole curvature: K(np) = {self.pole_np:.10g}, K(sp) = {self.pole_sp:.10g}"]
        for c in self.criteria:
            lines.append(
                f"  {c.criterion:<17s} {c.verdict:<15s} margin {c.margin:+.4g}"
                f"  (witness s = {c.witness_s:.6g}, value {c.witness_value:.6g})")
        for note in self.notes:
            lines.append(f"note: {note}")
        return lines


def _grid(p, grid_n):
    if grid_n < 64:
        raise ValueError(f"grid_n must be at least 64, got {grid_n}")
    return np.linspace(0.0, p.length, int(grid_n))


def _refine_max(p, objective, svals, values, width):
    """Golden-section polish of a grid argmax of ``objective``."""
    i = int(np.argmax(values))
    lo = float(svals[max(i - 1, 0)])
    hi = float(svals[min(i + 1, len(svals) - 1)])
    s_ref, v_ref = golden_max(objective, lo, hi, width)
    if v_ref > values[i]:
        return s_ref, float(v_ref)
    return float(svals[i]), float(values[i])


def _refine_min(p, objective, svals, values, width):
    i = int(np.argmin(values))
    lo = float(svals[max(i - 1, 0)])
    hi = float(svals[min(i + 1, len(svals) - 1)])
    s_ref, v_ref = golden_min(objective, lo, hi, width)
    if v_ref < values[i]:
        return s_ref, float(v_ref)
    return float(svals[i]), float(values[i])


def check_derivative(p, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """Decisive criterion: embeddable iff sup |a'| <= 1 (+ tol).

    sup |a'| is located on a uniform grid of ``grid_n`` points and
    polished by golden-section search to a bracket of width 1e-12*L.
    """
    svals = _grid(p, grid_n)
    d1 = p.jet_many(svals)[:, 1]
    width = REFINE_WIDTH_FRACTION * p.length
    s_at, sup = _refine_max(p, lambda x: abs(p.jet(x).d1), svals, np.abs(d1), width)
    verdict = EMBEDDABLE if sup <= 1.0 + tol else NOT_EMBEDDABLE
    return CriterionResult("derivative", verdict, s_at, sup, 1.0 - sup)


def check_disk(p, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """Decisive criterion: embeddable iff the minimal normalized disk
    integral over both pole families is >= 0 (- tol)."""
    svals = _grid(p, grid_n)
    d1 = p.jet_many(svals)[:, 1]
    width = REFINE_WIDTH_FRACTION * p.length
    s_np, min_np = _refine_min(p, lambda x: disk_integral_closed(p, x, "np"),
                               svals, 1.0 - d1, width)
    s_sp, min_sp = _refine_min(p, lambda x: disk_integral_closed(p, x, "sp"),
                               svals, 1.0 + d1, width)
    if min_np <= min_sp:
        s_at, worst = s_np, min_np
    else:
        s_at, worst = s_sp, min_sp
    verdict = EMBEDDABLE if worst >= -tol else NOT_EMBEDDABLE
    return CriterionResult("disk", verdict, s_at, worst, worst)


def check_latitude(p, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """Decisive criterion: embeddable iff every latitude circle has total
    geodesic curvature of magnitude <= 2*pi (1 + tol).

    The supremum over the open interior of the continuous function
    2*pi*|a'| equals its maximum over the closed interval, so the scan
    grids [0, L] inclusive (endpoints contribute exactly 2*pi, never a
    spurious violation) and interior peaks hiding between the poles and
    the first grid point stay inside the refinement bracket. The margin
    is normalized by 2*pi so it is comparable with the other criteria.
    """
    svals = _grid(p, grid_n)
    d1 = p.jet_many(svals)[:, 1]
    width = REFINE_WIDTH_FRACTION * p.length
    s_at, peak = _refine_max(p, lambda x: abs(latitude_geodesic_curvature_total(p, x)),
                             svals, TWO_PI * np.abs(d1), width)
    verdict = EMBEDDABLE if peak <= TWO_PI * (1.0 + tol) else NOT_EMBEDDABLE
    return CriterionResult("latitude", verdict, s_at, peak, (TWO_PI - peak) / TWO_PI)


def check_pole_obstruction(p, tol=DEFAULT_TOL):
    """One-sided screen: negative Gauss curvature at either pole rules out
    embedding; nonnegative pole curvature decides nothing."""
    k_np = gauss_curvature(p, 0.0)
    k_sp = gauss_curvature(p, p.length)
    if k_np <= k_sp:
        s_at, worst = 0.0, k_np
    else:
        s_at, worst = p.length, k_sp
    verdict = NOT_EMBEDDABLE if worst < -tol else INCONCLUSIVE
    return CriterionResult("pole-obstruction", verdict, s_at, worst, worst)


def check_nonneg_curvature(p, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """One-sided screen: K >= 0 everywhere implies embeddable; negative
    curvature somewhere decides nothing."""
    svals = _grid(p, grid_n)
    k = gauss_curvature_grid(p, svals)
    i = int(np.argmin(k))
    verdict = EMBEDDABLE if k[i] >= -tol else INCONCLUSIVE
    return CriterionResult("nonneg-curvature", verdict, float(svals[i]), float(k[i]), float(k[i]))


def full_report(p, grid_n=DEFAULT_GRID_N, tol=DEFAULT_TOL):
    """Run all five checks, assert their mutual consistency, and bundle
    the evidence. The overall verdict is the derivative criterion's.

    Raises CriteriaInconsistencyError if the decisive criteria disagree or
    a one-sided screen contradicts them; that is a numerical bug, never a
    valid outcome.
    """
    derivative = check_derivative(p, grid_n, tol)
    disk = check_disk(p, grid_n, tol)
    latitude = check_latitude(p, grid_n, tol)
    pole = check_pole_obstruction(p, tol)
    nonneg = check_nonneg_curvature(p, grid_n, tol)

    decisive = {derivative.verdict, disk.verdict, latitude.verdict}
    if len(decisive) != 1:
        raise CriteriaInconsistencyError(
            "decisive criteria disagree: "
            f"derivative={derivative.verdict}, disk={disk.verdict}, latitude={latitude.verdict} "
            f"(sup |a'| = {derivative.witness_value:.12g})")
    verdict = derivative.verdict
    if pole.verdict == NOT_EMBEDDABLE and verdict != NOT_EMBEDDABLE:
        raise CriteriaInconsistencyError(
            f"pole obstruction (K = {pole.witness_value:.6g} < 0) contradicts verdict {verdict}")
    if nonneg.verdict == EMBEDDABLE and verdict != EMBEDDABLE:
        raise CriteriaInconsistencyError(
            f"nonnegative curvature (min K = {nonneg.witness_value:.6g}) contradicts verdict {verdict}")

    notes = []
    if 1.0 < derivative.witness_value <= 1.0 + tol:
        notes.append(
            f"boundary case: sup |a'| = {derivative.witness_value:.12g} exceeds 1 by less than "
            f"tol = {tol:g}; declared embeddable")
    return EmbeddabilityReport(
        verdict=verdict,
        sup_a_prime=derivative.witness_value,
        sup_a_prime_s=derivative.witness_s,
        criteria=(derivative, disk, latitude, pole, nonneg),
        pole_np=gauss_curvature(p, 0.0),
        pole_sp=gauss_curvature(p, p.length),
        grid_n=int(grid_n),
        tol=float(tol),
        notes=tuple(notes),
    )
