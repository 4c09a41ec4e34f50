"""Brute-force oracle for rank preservation, plus executable checks of the
hyperplane lemma and the growth of the AR constant."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from rankembed.constructions import choose_c
from rankembed.embedding import Embedding
from rankembed.norms import PNorm
from rankembed.profile import PreferenceProfile

MARGIN_THRESHOLD = 1e-9


class VerificationError(ValueError):
    """The embedding cannot be checked against the profile as requested."""


@dataclass(frozen=True)
class Violation:
    voter: int
    better: int
    worse: int
    d_better: float | Fraction
    d_worse: float | Fraction

    def to_json(self) -> dict:
        # 1-based, like every file format.
        return {
            "voter": self.voter + 1,
            "better": self.better + 1,
            "worse": self.worse + 1,
            "d_better": self.d_better,
            "d_worse": self.d_worse,
        }


@dataclass
class VerificationReport:
    passed: bool
    margin: float | Fraction
    violations: list[Violation]
    exact: bool

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "margin": self.margin,
            "violations": [v.to_json() for v in self.violations],
            "mode": "exact" if self.exact else "float",
        }


def verify_embedding(
    profile: PreferenceProfile,
    emb: Embedding,
    mode: str = "float",
    threshold: float = MARGIN_THRESHOLD,
) -> VerificationReport:
    """Check every voter's ranking against its distance order.

    Only the ``m - 1`` adjacent pairs of each ranking are compared; for
    strict total orders that suffices.  In float mode a gap must exceed
    ``threshold``.  Exact mode compares rational p-th power sums (integer
    ``p``) or maxima (``p = inf``) and is tolerance free; the margin is exact
    when distances are rational and a float approximation otherwise.
    """
    if mode not in ("float", "exact"):
        raise ValueError(f"mode must be 'float' or 'exact', got {mode!r}")
    if len(emb.voters) != profile.n or len(emb.alternatives) != profile.m:
        raise VerificationError(
            f"embedding has {len(emb.voters)} voters and {len(emb.alternatives)} alternatives, "
            f"profile has n={profile.n}, m={profile.m}"
        )
    exact = mode == "exact"
    norm = emb.norm
    if exact:
        if not (isinstance(norm, PNorm) and norm.supports_exact()):
            raise VerificationError(f"exact mode needs a p-norm with integer p or p = inf, got {norm.to_string()}")
        if not emb.is_rational:
            raise VerificationError("exact mode needs rational (int or Fraction) coordinates")

    margin = math.inf
    violations = []
    for i, (ranking, v) in enumerate(zip(profile.rankings, emb.voters)):
        diffs = [[a - b for a, b in zip(v, alt)] for alt in emb.alternatives]
        if exact:
            keys = [norm.exact_key(d) for d in diffs]
            values = [norm.exact_value(k) for k in keys]
            floats = [norm(d) for d in diffs]
        else:
            floats = [norm(d) for d in diffs]
        for better, worse in zip(ranking, ranking[1:]):
            if exact:
                ok = keys[worse] > keys[better]
                if values[better] is not None:
                    gap = values[worse] - values[better]
                    d_b, d_w = values[better], values[worse]
                else:
                    gap = floats[worse] - floats[better]
                    d_b, d_w = floats[better], floats[worse]
            else:
                gap = floats[worse] - floats[better]
                ok = gap > threshold
                d_b, d_w = floats[better], floats[worse]
            margin = min(margin, gap)
            if not ok:
                violations.append(Violation(i, better, worse, d_b, d_w))
    if margin == math.inf:  # m = 1: nothing to compare
        margin = 0.0 if not exact else Fraction(0)
        return VerificationReport(True, margin, [], exact)
    return VerificationReport(not violations, margin, violations, exact)


@dataclass
class Lemma2Report:
    m: int
    p: float
    samples: int
    worst_equal_rel_error: float
    worst_crossing_gap: float
    failures: int
    rel_tolerance: float = 1e-12
    gap_tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "m": self.m,
            "p": self.p,
            "samples": self.samples,
            "direction1_worst_rel_error": self.worst_equal_rel_error,
            "direction2_worst_coordinate_gap": self.worst_crossing_gap,
            "failures": self.failures,
        }


def _unit_distance(x: np.ndarray, i: int, p: float) -> float:
    y = x.copy()
    y[i] -= 1.0
    return PNorm(p)(y.tolist())


def lemma2_check(m: int, p: float, samples: int, seed: int) -> Lemma2Report:
    """Equidistance to ``e_i`` and ``e_j`` under the p-norm happens exactly on ``x_i = x_j``.

    Direction 1 samples points with ``x_i = x_j`` and compares the two
    distances.  Direction 2 draws segments from the ``e_i`` side to the
    ``e_j`` side, bisects for the equidistant point and measures ``|x_i - x_j|``
    there.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if not 1 < p < math.inf:
        raise ValueError(f"need 1 < p < inf, got {p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    worst_rel = worst_gap = 0.0
    failures = 0
    for _ in range(samples):
        i, j = (int(k) for k in rng.choice(m, size=2, replace=False))

        x = rng.standard_normal(m) * 2.0
        x[j] = x[i]
        di, dj = _unit_distance(x, i, p), _unit_distance(x, j, p)
        rel = abs(di - dj) / max(di, dj)
        worst_rel = max(worst_rel, rel)

        y, z = rng.standard_normal(m) * 2.0, rng.standard_normal(m) * 2.0
        if y[i] < y[j]:
            y[i], y[j] = y[j], y[i]
        if z[i] > z[j]:
            z[i], z[j] = z[j], z[i]
        lo, hi = 0.0, 1.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            w = y + mid * (z - y)
            h = _unit_distance(w, i, p) - _unit_distance(w, j, p)
            if h < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-17:
                break
        w = y + 0.5 * (lo + hi) * (z - y)
        gap = float(abs(w[i] - w[j]))
        worst_gap = max(worst_gap, gap)
        if rel > 1e-12 or gap > 1e-9:
            failures += 1
    return Lemma2Report(m, p, samples, worst_rel, worst_gap, failures)


@dataclass
class CGrowthSeries:
    n: int
    points: list[tuple[float, float]]
    fitted_slope: float
    window: tuple[float, float]
    target_slope: float = field(init=False)

    def __post_init__(self):
        self.target_slope = 2.0 * math.log(self.n - 1)

    @property
    def increasing(self) -> bool:
        cs = [c for _, c in self.points]
        return all(a < b for a, b in zip(cs, cs[1:]))

    def to_csv(self) -> str:
        lines = ["t,c_inf,log_c"]
        lines.extend(f"{t:.17g},{c:.17g},{math.log(c):.17g}" for t, c in self.points)
        lines.append(
            f"# n={self.n} fitted_slope={self.fitted_slope:.17g} target={self.target_slope:.17g} "
            f"window={self.window[0]:.17g}..{self.window[1]:.17g}"
        )
        return "\n".join(lines) + "\n"


def c_growth_experiment(n: int, t_min: float, t_max: float, steps: int) -> CGrowthSeries:
    """``c_inf(t) = choose_c(n, 1 + 1/t)`` on a grid and the slope of ``log c_inf`` against ``t``.

    The slope is fitted by least squares on the upper half of the window.
    """
    if n < 3:
        raise ValueError("n must be >= 3 (the limiting slope 2 log(n-1) vanishes at n = 2)")
    if not (1 <= t_min < t_max) or steps < 2:
        raise ValueError("need 1 <= t_min < t_max and steps >= 2")
    ts = np.linspace(t_min, t_max, steps)
    points = [(float(t), choose_c(n, 1.0 + 1.0 / t)) for t in ts]
    half = 0.5 * (t_min + t_max)
    upper = [(t, c) for t, c in points if t >= half]
    slope = float(np.polyfit([t for t, _ in upper], [math.log(c) for _, c in upper], 1)[0])
    return CGrowthSeries(n, points, slope, (upper[0][0], upper[-1][0]))


@dataclass
class MonotonicityReport:
    checked: int
    violations: list[tuple[int, float, float, float, float]]

    @property
    def passed(self) -> bool:
        return not self.violations


def ar_monotonicity_check(n_grid, p_grid, tolerance: float = 1e-9) -> MonotonicityReport:
    """``choose_c(n, p) >= choose_c(n, q)`` for every ``p < q`` in the grid.

    ``tolerance`` absorbs the bisection error of the two infima.
    """
    ps = sorted(float(p) for p in p_grid)
    if not ps or not list(n_grid) or any(not 1 < p < math.inf for p in ps):
        raise ValueError("grids must be nonempty with every p finite and > 1")
    checked = 0
    violations = []
    for n in n_grid:
        cs = {p: choose_c(n, p) for p in ps}
        for a, p in enumerate(ps):
            for q in ps[a + 1 :]:
                checked += 1
                if cs[p] < cs[q] - tolerance:
                    violations.append((n, p, q, cs[p], cs[q]))
    return MonotonicityReport(checked, violations)
