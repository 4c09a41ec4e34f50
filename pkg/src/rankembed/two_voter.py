"""Two voters in the plane under an arbitrary norm.

Alternatives are placed one at a time in voter 1's preference order.  Each
new point lands strictly farther from voter 1 than everything placed so far
while voter 2 stays strictly outside the closed ball through the farthest
placed point.  Where voter 2 ranks the new alternative between two placed
ones, the point is found on a circle (a sphere of the given norm) around
voter 1 by bisection on the angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from rankembed.embedding import Embedding
from rankembed.norms import NormError, NormSpec, boundary_point, check_norm_axioms, distance
from rankembed.profile import PreferenceProfile, rank_matrix

DELTA = 0.1
THETA_TOLERANCE = 1e-12
MAX_BISECTIONS = 200
SLACK_FRACTION = 1e-3


class AnnulusError(RuntimeError):
    """Bisection failed to find a point in the annulus; the norm is likely broken."""


@dataclass(frozen=True)
class AnnulusSpec:
    """Search data for one between-placement.

    ``center1``/``center2`` are the two voters, ``(s1, s2)`` bounds the open
    annulus around ``center2``, ``exclusion_radius`` and ``search_radius``
    are radii around ``center1``.
    """

    center1: tuple[float, float]
    center2: tuple[float, float]
    s1: float
    s2: float
    exclusion_radius: float
    search_radius: float
    p1: tuple[float, float] | None = None
    p2: tuple[float, float] | None = None

    def validate(self, norm: NormSpec) -> None:
        if not 0 < self.s1 < self.s2:
            raise ValueError(f"need 0 < s1 < s2, got s1={self.s1}, s2={self.s2}")
        sep = distance(norm, self.center1, self.center2)
        if not self.exclusion_radius < self.search_radius < sep:
            raise ValueError(
                f"need r2 < r3 < |v1 - v2|, got r2={self.exclusion_radius}, r3={self.search_radius}, |v1 - v2|={sep}"
            )

    @classmethod
    def from_points(cls, norm, center1, center2, p1, p2, exclusion_radius, search_radius) -> AnnulusSpec:
        d1, d2 = distance(norm, center2, p1), distance(norm, center2, p2)
        return cls(center1, center2, min(d1, d2), max(d1, d2), exclusion_radius, search_radius, p1, p2)


def annulus_place(spec: AnnulusSpec, norm: NormSpec) -> tuple[float, float]:
    """A point at distance ``search_radius`` from ``center1`` strictly inside the annulus."""
    spec.validate(norm)
    v1, v2 = spec.center1, spec.center2
    r3 = spec.search_radius
    target = 0.5 * (spec.s1 + spec.s2)
    slack = SLACK_FRACTION * (spec.s2 - spec.s1)
    toward = math.atan2(v2[1] - v1[1], v2[0] - v1[0])

    def g(theta):
        x = boundary_point(norm, v1, r3, theta)
        return distance(norm, v2, x) - target, x

    lo, hi = toward, toward + math.pi
    g_lo, _ = g(lo)
    g_hi, _ = g(hi)
    if not (g_lo <= 0 < g_hi):
        raise AnnulusError(f"no sign change on the search circle (g={g_lo}, {g_hi}); is this a norm?")
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        value, x = g(mid)
        if value <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= THETA_TOLERANCE or value == 0.0:
            d = value + target
            if min(d - spec.s1, spec.s2 - d) >= slack:
                return x
    raise AnnulusError(f"bisection did not converge within {MAX_BISECTIONS} steps")


@dataclass
class Step:
    alternative: int
    rule: str
    radius: float
    separation_ok: bool


@dataclass
class TwoVoterState:
    """Induction state: placed points in voter-1 order and the invariant history."""

    v1: tuple[float, float]
    v2: tuple[float, float]
    norm: NormSpec
    placed: list[tuple[float, float]] = field(default_factory=list)
    order: list[int] = field(default_factory=list)
    radii: list[float] = field(default_factory=list)
    v2_dists: list[float] = field(default_factory=list)
    history: list[Step] = field(default_factory=list)
    epsilon_policy: str = "eps = (|v1 - v2| - max radius) / (2 |v1 - v2|)"

    @property
    def separation(self) -> float:
        return distance(self.norm, self.v1, self.v2)

    @property
    def max_radius(self) -> float:
        return max(self.radii, default=0.0)

    def invariant_holds(self) -> bool:
        increasing = all(a < b for a, b in zip(self.radii, self.radii[1:]))
        return increasing and self.separation > self.max_radius

    def place(self, alt: int, x: tuple[float, float], rule: str) -> None:
        self.placed.append(x)
        self.order.append(alt)
        self.radii.append(distance(self.norm, self.v1, x))
        self.v2_dists.append(distance(self.norm, self.v2, x))
        ok = self.invariant_holds()
        self.history.append(Step(alt, rule, self.radii[-1], ok))
        if not ok:
            raise AnnulusError(f"induction invariant broken after placing alternative {alt + 1} by rule {rule}")


def _along(v1, v2, t):
    return (v1[0] + t * (v2[0] - v1[0]), v1[1] + t * (v2[1] - v1[1]))


def build_two_voter(profile: PreferenceProfile, norm: NormSpec, axiom_samples: int = 500) -> TwoVoterState:
    if profile.n != 2:
        raise ValueError(f"two-voter construction needs exactly 2 voters, got {profile.n}")
    if profile.rankings[0] == profile.rankings[1]:
        raise ValueError("the two voters must have distinct rankings (reduce the profile first)")
    if norm.dim not in (None, 2):
        raise NormError(f"norm is {norm.dim}-dimensional; the plane is required")
    report = check_norm_axioms(norm, axiom_samples, seed=0, dim=2)
    if not report.passed:
        raise NormError(f"norm fails the axiom checks: {report.to_json()}")

    state = TwoVoterState(v1=(0.0, 0.0), v2=(1.0, 0.0), norm=norm)
    v1, v2 = state.v1, state.v2
    sep = state.separation
    rk2 = rank_matrix(profile)[1]

    for q, alt in enumerate(profile.rankings[0]):
        better = [k for k, a in enumerate(state.order) if rk2[a] < rk2[alt]]
        worse = [k for k, a in enumerate(state.order) if rk2[a] > rk2[alt]]
        if q == 0:
            state.place(alt, _along(v1, v2, DELTA), "base")
        elif not worse:
            # Last for voter 2 among placed: beyond v1, away from v2.
            eps = (sep - state.max_radius) / (2 * sep)
            state.place(alt, _along(v1, v2, -(1 - eps)), "last")
        elif q == 1:
            state.place(alt, _along(v1, v2, 2 * DELTA), "base")
        elif not better:
            # Best for voter 2 among placed: on the segment, closer to v2 than anything placed.
            lower = max(state.max_radius, sep - min(state.v2_dists))
            r = 0.5 * (lower + sep)
            state.place(alt, _along(v1, v2, r / sep), "first")
        else:
            kb = max(better, key=lambda k: rk2[state.order[k]])
            kw = min(worse, key=lambda k: rk2[state.order[k]])
            spec = AnnulusSpec.from_points(
                norm,
                v1,
                v2,
                state.placed[kb],
                state.placed[kw],
                exclusion_radius=max(state.radii[kb], state.radii[kw]),
                search_radius=0.5 * (state.max_radius + sep),
            )
            state.place(alt, annulus_place(spec, norm), "annulus")
    return state


def embedding_from_state(state: TwoVoterState, m: int) -> Embedding:
    alts = [None] * m
    for alt, x in zip(state.order, state.placed):
        alts[alt] = x
    rules = "".join(s.rule[0] for s in state.history)
    return Embedding((state.v1, state.v2), tuple(alts), 2, state.norm, "two-voter", {"delta": DELTA, "rules": rules})


def two_voter_embedding(profile: PreferenceProfile, norm: NormSpec) -> Embedding:
    return embedding_from_state(build_two_voter(profile, norm), profile.m)
