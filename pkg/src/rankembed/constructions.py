"""Rank-preserving embeddings of preference profiles under p-norms.

Every builder returns an :class:`~rankembed.embedding.Embedding`; none of
them verifies its own output (see :mod:`rankembed.verify`).  Coordinates are
ints or :class:`~fractions.Fraction` whenever the construction is rational,
so exact verification is possible.
"""

from __future__ import annotations

import math
from fractions import Fraction

from rankembed.embedding import Embedding
from rankembed.norms import NormSpec, PNorm
from rankembed.profile import PreferenceProfile, rank_matrix, rank_statistics, reduce_irreducible

C_TOLERANCE = 1e-9


class ConstructionError(ValueError):
    """A construction's preconditions are not met."""


def _gap(c: float, p: float) -> float:
    """``(c+2)^p - (c+1)^p`` without cancellation for large ``c``."""
    return (c + 1.0) ** p * math.expm1(p * math.log1p(1.0 / (c + 1.0)))


def c_infimum(n: int, p: float, top_rank: int) -> float:
    """Smallest ``c >= 0`` with ``(c+2)^p - (c+1)^p >= (n-1)(top_rank^p - 1)``.

    The map ``c -> (c+2)^p - (c+1)^p`` is strictly increasing for ``p > 1``,
    so the root is bracketed by doubling and then bisected to an absolute
    tolerance of 1e-9 (or to float resolution once ``c`` is huge).
    """
    if n < 1:
        raise ConstructionError(f"n must be >= 1, got {n}")
    if not (1 < p < math.inf):
        raise ConstructionError(f"choose_c needs 1 < p < inf, got p={p}")
    target = (n - 1) * math.expm1(p * math.log(top_rank))
    if target <= 0 or _gap(0.0, p) >= target:
        return 0.0
    lo, hi = 0.0, 1.0
    while _gap(hi, p) < target:
        lo, hi = hi, 2.0 * hi
    while hi - lo > C_TOLERANCE:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _gap(mid, p) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def choose_c(n: int, p: float) -> float:
    """Infimum of the AR scale ``c`` from the worst-case condition
    ``(c+2)^p - (c+1)^p > (n-1)(n^p - 1)``.

    >>> round(choose_c(3, 2), 6)
    6.5
    """
    return c_infimum(n, p, n)


def _require_pnorm(norm: NormSpec, construction: str, pointer: str) -> PNorm:
    if not isinstance(norm, PNorm):
        raise ConstructionError(f"{construction} embedding is defined for p-norms only, got {norm.to_string()}")
    if norm.p == 1:
        raise ConstructionError(
            f"{construction} embedding does not work for p = 1; use {pointer} instead"
        )
    return norm


def ar_embedding(profile: PreferenceProfile, norm: NormSpec | None = None, c=None) -> Embedding:
    """Alternative-rank embedding: voter ``i`` at ``c * e_i``, alternative ``j`` at ``-rk[.][j]``.

    With ``c=None`` the scale is chosen automatically: ``c = m`` for
    ``p = inf``; otherwise one more than the worst-case infimum, where the
    worst case bounds the other voters' ranks by ``max(n, m)``.
    """
    norm = _require_pnorm(norm or PNorm(2.0), "AR", "max-rank or rank-pivot")
    n, m = profile.n, profile.m
    if c is None:
        if norm.is_inf:
            c, rule = m, "c = m"
        else:
            c, rule = c_infimum(n, norm.p, max(n, m)) + 1.0, "c = c_inf(n, p, max(n, m)) + 1"
    else:
        if not c > 0:
            raise ConstructionError(f"c must be positive, got {c}")
        rule = "given"
    rk = rank_matrix(profile)
    zero = 0 if isinstance(c, (int, Fraction)) else 0.0
    voters = tuple(tuple(c if k == i else zero for k in range(n)) for i in range(n))
    alts = tuple(tuple(-rk[i][j] for i in range(n)) for j in range(m))
    return Embedding(voters, alts, n, norm, "ar", {"c": c, "c_rule": rule})


def max_rank_embedding(profile: PreferenceProfile, tie_break: str = "smallest") -> Embedding:
    """Max-rank 1-norm construction, evaluated exactly as its case formula reads.

    The output is not guaranteed to be rank-preserving; pass it to the
    verifier.  ``tie_break`` selects which voter attaining an alternative's
    worst rank plays the special role.
    """
    n, m = profile.n, profile.m
    if n < 2:
        raise ConstructionError("max-rank embedding needs n >= 2 (with n = 1 every alternative collapses)")
    rk = rank_matrix(profile)
    stats = rank_statistics(profile, tie_break)
    alts = []
    for j in range(m):
        mk, g = stats.mk[j], stats.g[j]
        spread = sum(rk[k][j] - mk for k in range(n))
        alts.append(
            tuple(
                Fraction(rk[i][j] - mk) if i == g else Fraction(5, 2) + 2 * rk[i][j] + spread
                for i in range(n)
            )
        )
    voters = tuple(tuple(m if k == i else 0 for k in range(n)) for i in range(n))
    return Embedding(voters, tuple(alts), n, PNorm(1.0), "max-rank", {"tie_break": tie_break})


def rank_pivot_embedding(profile: PreferenceProfile) -> Embedding:
    """1-norm embedding in ``m-1`` dimensions with the last alternative as pivot at the origin."""
    m = profile.m
    if m < 2:
        raise ConstructionError("rank-pivot embedding needs m >= 2")
    d = m - 1
    alts = tuple(tuple(2 * m if k == j else 0 for k in range(d)) for j in range(d)) + ((0,) * d,)
    voters = []
    for row in rank_matrix(profile):
        pivot = row[m - 1]
        voters.append(tuple(2 * m - row[k] if row[k] < pivot else m - row[k] for k in range(d)))
    return Embedding(tuple(voters), alts, d, PNorm(1.0), "rank-pivot", {})


def median_based_embedding(profile: PreferenceProfile, norm: NormSpec | None = None) -> Embedding:
    """Alternatives at the basis vectors of R^m, voters on the simplex ``sum(x) = 1``.

    A voter's coordinate for the alternative in position ``k`` (1-based) of
    its ranking is ``2(m-k+1) / (m(m+1))``: strictly decreasing along the
    ranking, nonnegative, and summing to one.
    """
    norm = _require_pnorm(norm or PNorm(2.0), "median-based", "rank-pivot")
    m = profile.m
    if m < 2:
        raise ConstructionError("median-based embedding needs m >= 2")
    denom = m * (m + 1)
    alts = tuple(tuple(1 if k == j else 0 for k in range(m)) for j in range(m))
    voters = tuple(tuple(Fraction(2 * (m - r + 1), denom) for r in row) for row in rank_matrix(profile))
    return Embedding(voters, alts, m, norm, "median", {"affine_dim": m - 1, "hyperplane": "sum(x) = 1"})


CONSTRUCTIONS = ("ar", "max-rank", "rank-pivot", "median", "two-voter")


def build(profile: PreferenceProfile, construction: str, norm: NormSpec | None = None, **options) -> Embedding:
    """Reduce ``profile``, run ``construction`` and expand back to every original voter."""
    from rankembed.two_voter import two_voter_embedding

    reduced, class_map = reduce_irreducible(profile)
    if construction == "ar":
        emb = ar_embedding(reduced, norm, c=options.get("c"))
    elif construction == "max-rank":
        emb = max_rank_embedding(reduced, tie_break=options.get("tie_break", "smallest"))
    elif construction == "rank-pivot":
        emb = rank_pivot_embedding(reduced)
    elif construction == "median":
        emb = median_based_embedding(reduced, norm)
    elif construction == "two-voter":
        if norm is None:
            raise ConstructionError("two-voter construction needs an explicit norm")
        emb = two_voter_embedding(reduced, norm)
    else:
        raise ConstructionError(f"unknown construction {construction!r}; choose from {', '.join(CONSTRUCTIONS)}")
    if reduced is profile:
        return emb
    return emb.expand(class_map)
