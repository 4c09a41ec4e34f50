"""Preference profiles: strict complete rankings of ``m`` alternatives by ``n`` voters.

Indices are 0-based in memory and 1-based in every file format.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

#: Name recorded alongside generated profiles so sweeps can be reproduced.
PRNG_ALGORITHM = "numpy.random.PCG64"
SAMPLER_VERSION = "permutation-rejection/1"


class ProfileError(ValueError):
    """Raised for malformed or inconsistent profile input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PreferenceProfile:
    m: int
    n: int
    rankings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ProfileError(f"need m >= 1 and n >= 1, got m={self.m}, n={self.n}")
        if len(self.rankings) != self.n:
            raise ProfileError(f"expected {self.n} rankings, got {len(self.rankings)}")
        full = set(range(self.m))
        for i, ranking in enumerate(self.rankings):
            if len(ranking) != self.m or set(ranking) != full:
                raise ProfileError(f"ranking of voter {i + 1} is not a permutation of 1..{self.m}")

    @classmethod
    def from_rankings(cls, rankings: Sequence[Sequence[int]], one_based: bool = False) -> PreferenceProfile:
        shift = 1 if one_based else 0
        rows = tuple(tuple(int(a) - shift for a in r) for r in rankings)
        if not rows:
            raise ProfileError("a profile needs at least one voter")
        return cls(m=len(rows[0]), n=len(rows), rankings=rows)

    def is_irreducible(self) -> bool:
        return len(set(self.rankings)) == self.n


@dataclass(frozen=True)
class RankStatistics:
    """Worst rank of each alternative and the voter attaining it."""

    mk: tuple[int, ...]
    g: tuple[int, ...]


def rank_matrix(profile: PreferenceProfile) -> list[list[int]]:
    """``rk[i][j]`` is the 1-based rank voter ``i`` gives alternative ``j``."""
    rk = []
    for ranking in profile.rankings:
        row = [0] * profile.m
        for pos, alt in enumerate(ranking):
            row[alt] = pos + 1
        rk.append(row)
    return rk


def rank_statistics(profile: PreferenceProfile, tie_break: str = "smallest") -> RankStatistics:
    """Per-alternative max rank ``mk_j`` and its argmax voter ``g_j`` (0-based).

    ``tie_break`` picks the smallest or largest voter index among those
    attaining the maximum.
    """
    if tie_break not in ("smallest", "largest"):
        raise ValueError(f"tie_break must be 'smallest' or 'largest', got {tie_break!r}")
    rk = rank_matrix(profile)
    voters = range(profile.n) if tie_break == "smallest" else range(profile.n - 1, -1, -1)
    mk, g = [], []
    for j in range(profile.m):
        best = max(rk[i][j] for i in range(profile.n))
        mk.append(best)
        g.append(next(i for i in voters if rk[i][j] == best))
    return RankStatistics(mk=tuple(mk), g=tuple(g))


def reduce_irreducible(profile: PreferenceProfile) -> tuple[PreferenceProfile, list[int]]:
    """Merge voters with identical rankings.

    Returns the reduced profile (classes in order of first appearance) and a
    list mapping each original voter to its class index.
    """
    classes: dict[tuple[int, ...], int] = {}
    mapping = []
    for ranking in profile.rankings:
        mapping.append(classes.setdefault(ranking, len(classes)))
    reps = tuple(classes)
    if len(reps) == profile.n:
        return profile, mapping
    return PreferenceProfile(m=profile.m, n=len(reps), rankings=reps), mapping


def random_profile(m: int, n: int, seed: int) -> PreferenceProfile:
    """Draw ``n`` distinct rankings uniformly by rejection sampling."""
    if m < 1 or n < 1:
        raise ProfileError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    if n > math.factorial(m):
        raise ProfileError(f"cannot draw {n} distinct rankings of {m} alternatives ({m}! = {math.factorial(m)})")
    rng = np.random.Generator(np.random.PCG64(seed))
    seen: set[tuple[int, ...]] = set()
    rows = []
    while len(rows) < n:
        perm = tuple(int(a) for a in rng.permutation(m))
        if perm not in seen:
            seen.add(perm)
            rows.append(perm)
    return PreferenceProfile(m=m, n=n, rankings=tuple(rows))


def parse_profile(text: str) -> PreferenceProfile:
    """Parse the plain-text or JSON profile format."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    header = None
    rows: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise ProfileError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(values) != 2 or values[0] < 1 or values[1] < 1:
                raise ProfileError("header must be 'm n' with m, n >= 1", lineno)
            header = values
            continue
        m = header[0]
        if len(rows) == header[1]:
            raise ProfileError(f"more than {header[1]} rankings", lineno)
        _check_row(values, m, lineno)
        rows.append(tuple(v - 1 for v in values))
    if header is None:
        raise ProfileError("missing header line 'm n'")
    if len(rows) != header[1]:
        raise ProfileError(f"expected {header[1]} rankings, found {len(rows)}")
    return PreferenceProfile(m=header[0], n=header[1], rankings=tuple(rows))


def _check_row(values: list[int], m: int, lineno: int | None) -> None:
    if len(values) != m:
        raise ProfileError(f"ranking has {len(values)} entries, expected {m}", lineno)
    for v in values:
        if not 1 <= v <= m:
            raise ProfileError(f"alternative index {v} out of range 1..{m}", lineno)
    if len(set(values)) != m:
        raise ProfileError("ranking is not a permutation (repeated alternative)", lineno)


def _parse_json(text: str) -> PreferenceProfile:
    try:
        data = json.loads(text)
        m, n, rankings = int(data["m"]), int(data["n"]), data["rankings"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ProfileError(f"bad JSON profile: {exc}") from None
    if len(rankings) != n:
        raise ProfileError(f"expected {n} rankings, found {len(rankings)}")
    for i, row in enumerate(rankings):
        try:
            _check_row([int(v) for v in row], m, None)
        except ProfileError as exc:
            raise ProfileError(f"ranking {i + 1}: {exc}") from None
    return PreferenceProfile(m=m, n=n, rankings=tuple(tuple(int(v) - 1 for v in r) for r in rankings))


def serialize_profile(profile: PreferenceProfile, header_comment: str | None = None) -> str:
    lines = []
    if header_comment:
        lines.extend(f"# {c}" for c in header_comment.splitlines())
    lines.append(f"{profile.m} {profile.n}")
    lines.extend(" ".join(str(a + 1) for a in r) for r in profile.rankings)
    return "\n".join(lines) + "\n"


def profile_to_json(profile: PreferenceProfile) -> dict:
    return {
        "m": profile.m,
        "n": profile.n,
        "rankings": [[a + 1 for a in r] for r in profile.rankings],
    }
