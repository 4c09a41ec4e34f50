"""Norm families used by the constructions.

Three kinds are supported: p-norms (``1 <= p <= inf``), positively weighted
sums of p-norms, and Minkowski gauges of centrally symmetric convex polygons
in the plane.  All are immutable and evaluate on plain sequences of numbers
(ints, floats or :class:`fractions.Fraction`).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

import numpy as np

Vector = Sequence[float]


class NormError(ValueError):
    """Invalid norm specification or incompatible vector."""


def _check_vector(x: Vector, dim: int | None) -> None:
    if len(x) < 1:
        raise NormError("vectors need at least one component")
    if dim is not None and len(x) != dim:
        raise NormError(f"dimension mismatch: norm is {dim}-dimensional, vector has {len(x)} components")


def _pnorm_float(x: Vector, p: float) -> float:
    a = [abs(float(c)) for c in x]
    if any(not math.isfinite(c) for c in a):
        raise NormError("vector components must be finite")
    s = max(a)
    if s == 0.0:
        return 0.0
    if math.isinf(p):
        return s
    if p == 1:
        return math.fsum(a)
    if p == 2:
        return math.hypot(*a)
    return s * math.fsum((c / s) ** p for c in a) ** (1.0 / p)


@dataclass(frozen=True)
class PNorm:
    p: float

    def __post_init__(self):
        if not (self.p >= 1):
            raise NormError(f"p-norm needs p >= 1, got {self.p}")

    @property
    def dim(self) -> int | None:
        return None

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    def __call__(self, x: Vector) -> float:
        _check_vector(x, None)
        return _pnorm_float(x, self.p)

    def supports_exact(self) -> bool:
        return self.is_inf or float(self.p).is_integer()

    def exact_key(self, x: Vector) -> Fraction:
        """A rational quantity strictly monotone in the norm: ``sum |x|^p`` or ``max |x|``."""
        if not self.supports_exact():
            raise NormError(f"exact comparison needs integer p or inf, got p={self.p}")
        a = [abs(Fraction(c)) for c in x]
        if self.is_inf:
            return max(a)
        p = int(self.p)
        return sum((c**p for c in a), Fraction(0))

    def exact_value(self, key: Fraction) -> Fraction | None:
        """Norm value recovered from :meth:`exact_key` when it is rational."""
        if self.is_inf or self.p == 1:
            return key
        return None

    def to_string(self) -> str:
        return "p:inf" if self.is_inf else f"p:{_fmt_p(self.p)}"


@dataclass(frozen=True)
class WeightedSum:
    """``sum_k w_k * ||x||_{p_k}`` with every weight positive."""

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.terms:
            raise NormError("weighted sum needs at least one term")
        for w, p in self.terms:
            if not (w > 0 and math.isfinite(w)):
                raise NormError(f"weights must be positive and finite, got {w}")
            if not (p >= 1):
                raise NormError(f"p must be >= 1, got {p}")

    @property
    def dim(self) -> int | None:
        return None

    def __call__(self, x: Vector) -> float:
        _check_vector(x, None)
        return math.fsum(w * _pnorm_float(x, p) for w, p in self.terms)

    def supports_exact(self) -> bool:
        return False

    def to_string(self) -> str:
        return "sum:" + "+".join(f"{_fmt_num(w)}*p{_fmt_p(p)}" for w, p in self.terms)


@dataclass(frozen=True)
class PolygonGauge:
    """Minkowski gauge of a centrally symmetric convex polygon containing 0."""

    vertices: tuple[tuple[float, float], ...]
    _angles: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = [(float(x), float(y)) for x, y in self.vertices]
        if len(pts) < 4:
            raise NormError("a symmetric polygon needs at least 4 vertices")
        if any(not (math.isfinite(x) and math.isfinite(y)) for x, y in pts):
            raise NormError("polygon vertices must be finite")
        if any(x == 0.0 and y == 0.0 for x, y in pts):
            raise NormError("the origin cannot be a polygon vertex")
        pts.sort(key=lambda v: math.atan2(v[1], v[0]))
        angles = [math.atan2(y, x) for x, y in pts]
        if any(b <= a for a, b in zip(angles, angles[1:])):
            raise NormError("two vertices lie on the same ray from the origin")
        scale = max(math.hypot(x, y) for x, y in pts)
        tol = 1e-12 * scale
        for x, y in pts:
            if not any(abs(x + u) <= tol and abs(y + v) <= tol for u, v in pts):
                raise NormError(f"polygon is not centrally symmetric: ({x}, {y}) has no opposite vertex")
        k = len(pts)
        for i in range(k):
            ax, ay = pts[i]
            bx, by = pts[(i + 1) % k]
            cx, cy = pts[(i + 2) % k]
            turn = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
            if turn <= 1e-14 * scale * scale:
                raise NormError("polygon is not strictly convex")
        object.__setattr__(self, "vertices", tuple(pts))
        object.__setattr__(self, "_angles", tuple(angles))

    @property
    def dim(self) -> int:
        return 2

    def _edge(self, theta: float) -> tuple[tuple[float, float], tuple[float, float]]:
        k = bisect.bisect_right(self._angles, theta)
        n = len(self.vertices)
        return self.vertices[(k - 1) % n], self.vertices[k % n]

    def __call__(self, x: Vector) -> float:
        _check_vector(x, 2)
        x0, x1 = float(x[0]), float(x[1])
        if x0 == 0.0 and x1 == 0.0:
            return 0.0
        (ax, ay), (bx, by) = self._edge(math.atan2(x1, x0))
        # x / t lies on the edge line through a and b.
        return (x0 * (by - ay) - x1 * (bx - ax)) / (ax * by - ay * bx)

    def supports_exact(self) -> bool:
        return False

    def to_string(self) -> str:
        return "poly:" + ";".join(f"{_fmt_num(x)},{_fmt_num(y)}" for x, y in self.vertices)


NormSpec = Union[PNorm, WeightedSum, PolygonGauge]


def _fmt_num(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def _fmt_p(p: float) -> str:
    return "inf" if math.isinf(p) else _fmt_num(p)


def _parse_p(token: str) -> float:
    token = token.strip().lower()
    if token in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return float(token)
    except ValueError:
        raise NormError(f"bad p value {token!r}") from None


def norm_eval(spec: NormSpec, x: Vector) -> float:
    return spec(x)


def distance(spec: NormSpec, x: Vector, y: Vector) -> float:
    if len(x) != len(y):
        raise NormError(f"dimension mismatch: {len(x)} vs {len(y)}")
    return spec([a - b for a, b in zip(x, y)])


def boundary_point(spec: NormSpec, center: Vector, radius: float, theta: float) -> tuple[float, float]:
    """Point at gauge distance ``radius`` from ``center`` in direction ``theta``."""
    if not radius > 0:
        raise NormError(f"radius must be positive, got {radius}")
    c, s = math.cos(theta), math.sin(theta)
    scale = radius / spec((c, s))
    return (float(center[0]) + scale * c, float(center[1]) + scale * s)


def read_polygon(path: str | Path) -> PolygonGauge:
    verts = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise NormError(f"{path}:{lineno}: expected 'x y'")
        try:
            verts.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise NormError(f"{path}:{lineno}: non-numeric vertex") from None
    return PolygonGauge(tuple(verts))


def parse_norm(text: str) -> NormSpec:
    """Parse ``p:<value|inf>``, ``sum:<w>*p<value>+...`` or ``poly:<path>``.

    ``poly:`` also accepts inline vertices ``x,y;x,y;...`` as written by
    :meth:`PolygonGauge.to_string`.
    """
    kind, sep, body = text.strip().partition(":")
    if not sep:
        raise NormError(f"norm spec {text!r} lacks a 'kind:' prefix")
    kind = kind.lower()
    if kind == "p":
        return PNorm(_parse_p(body))
    if kind == "sum":
        terms = []
        for term in body.split("+"):
            w, star, p = term.strip().partition("*")
            if not star or not p.strip().lower().startswith("p"):
                raise NormError(f"bad weighted-sum term {term!r}; expected '<w>*p<value>'")
            try:
                weight = float(w)
            except ValueError:
                raise NormError(f"bad weight {w!r}") from None
            terms.append((weight, _parse_p(p.strip()[1:])))
        return WeightedSum(tuple(terms))
    if kind == "poly":
        if ";" in body or not Path(body).exists() and "," in body:
            verts = []
            for pair in body.split(";"):
                x, _, y = pair.partition(",")
                try:
                    verts.append((float(x), float(y)))
                except ValueError:
                    raise NormError(f"bad inline vertex {pair!r}") from None
            return PolygonGauge(tuple(verts))
        try:
            return read_polygon(body)
        except OSError as exc:
            raise NormError(f"cannot read polygon file {body!r}: {exc}") from None
    raise NormError(f"unknown norm kind {kind!r}")


def random_symmetric_polygon(n_vertices: int, seed: int) -> PolygonGauge:
    """Seeded centrally symmetric convex polygon with ``n_vertices`` vertices.

    Vertices sit on a random rotated ellipse at sorted random parameters
    (plus their reflections), which keeps them in strictly convex position.
    """
    if n_vertices < 4 or n_vertices % 2:
        raise NormError("need an even vertex count >= 4")
    rng = np.random.Generator(np.random.PCG64(seed))
    k = n_vertices // 2
    a, b = rng.uniform(0.5, 2.0, 2)
    phi = rng.uniform(0.0, math.pi)
    # Jittered grid on [0, pi) keeps neighbouring vertices apart.
    ts = (np.arange(k) + rng.uniform(0.1, 0.9, k)) * (math.pi / k)
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    verts = []
    for t in np.concatenate([ts, ts + math.pi]):
        x, y = a * math.cos(t), b * math.sin(t)
        verts.append((x * cos_phi - y * sin_phi, x * sin_phi + y * cos_phi))
    half = verts[:k]
    verts = half + [(-x, -y) for x, y in half]
    return PolygonGauge(tuple(verts))


@dataclass
class AxiomReport:
    samples: int
    positivity: bool
    homogeneity_worst: float
    triangle_worst: float
    symmetry_worst: float
    tolerance: float = 1e-9

    @property
    def homogeneity(self) -> bool:
        return self.homogeneity_worst <= self.tolerance

    @property
    def triangle(self) -> bool:
        return self.triangle_worst <= self.tolerance

    @property
    def symmetry(self) -> bool:
        return self.symmetry_worst <= self.tolerance

    @property
    def passed(self) -> bool:
        return self.positivity and self.homogeneity and self.triangle and self.symmetry

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "samples": self.samples,
            "positivity": self.positivity,
            "homogeneity_worst_rel_error": self.homogeneity_worst,
            "triangle_worst_rel_violation": self.triangle_worst,
            "symmetry_worst_rel_error": self.symmetry_worst,
            "tolerance": self.tolerance,
        }


def check_norm_axioms(spec: NormSpec, samples: int, seed: int, dim: int | None = None) -> AxiomReport:
    """Sample-check the norm axioms on seeded random vectors.

    Violations are reported, never raised.  Relative errors are measured
    against the magnitudes involved so the check is scale free.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    d = spec.dim or dim or 2
    rng = np.random.Generator(np.random.PCG64(seed))
    xs = rng.standard_normal((samples, d)) * rng.lognormal(0.0, 2.0, (samples, 1))
    ys = rng.standard_normal((samples, d)) * rng.lognormal(0.0, 2.0, (samples, 1))
    ts = rng.standard_normal(samples) * rng.lognormal(0.0, 2.0, samples)

    positivity = spec([0.0] * d) == 0.0
    hom = tri = sym = 0.0
    for x, y, t in zip(xs, ys, ts):
        x, y, t = x.tolist(), y.tolist(), float(t)
        nx, ny = spec(x), spec(y)
        if not (nx > 0 and ny > 0):
            positivity = False
            continue
        ntx = spec([t * c for c in x])
        hom = max(hom, abs(ntx - abs(t) * nx) / (abs(t) * nx))
        nsum = spec([a + b for a, b in zip(x, y)])
        tri = max(tri, (nsum - nx - ny) / (nx + ny))
        sym = max(sym, abs(spec([-c for c in x]) - nx) / nx)
    return AxiomReport(samples, positivity, hom, tri, sym)
