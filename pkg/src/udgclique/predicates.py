"""Exact distance-geometry predicates.

All inputs are squared lengths (or rational coordinates for the hull
predicates).  Sums of square roots are compared by repeated squaring with
explicit sign bookkeeping, so no irrational number is ever formed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .model import Point

LESS, EQUAL, GREATER = -1, 0, 1


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def heron16(x2: Fraction, y2: Fraction, z2: Fraction) -> Fraction:
    """16 * area**2 of the triangle with squared sides ``x2, y2, z2``.

    Negative when the sides violate the triangle inequality, zero when the
    triangle is degenerate.
    """
    return 2 * (x2 * y2 + y2 * z2 + z2 * x2) - (x2 * x2 + y2 * y2 + z2 * z2)


def sign_lin_sqrt(a: Fraction, b: Fraction, c: Fraction) -> int:
    """Sign of ``a + b*sqrt(c)`` for rational ``a, b`` and ``c >= 0``."""
    if b == 0 or c == 0:
        return _sign(a)
    sb = _sign(b)
    sa = _sign(a)
    if sa == 0 or sa == sb:
        return sb
    t = _sign(a * a - b * b * c)
    return t if sa > 0 else -t


def cmp_sqrt_sum(s: Fraction, t: Fraction, u: Fraction, v: Fraction) -> int:
    """Compare ``sqrt(s) + sqrt(t)`` with ``sqrt(u) + sqrt(v)``.

    Returns -1, 0 or 1.  Both sides are non-negative, so the sign of the
    difference equals the sign of the difference of squares,
    ``(s + t - u - v) + 2 sqrt(st) - 2 sqrt(uv)``.
    """
    if min(s, t, u, v) < 0:
        raise ValueError("radicands must be non-negative")
    half = Fraction(s + t - u - v) / 2
    p = s * t
    q = u * v
    if half >= 0:
        return sign_lin_sqrt(half * half + p - q, 2 * half, p)
    return sign_lin_sqrt(p - q - half * half, 2 * half, q)


def cmp_one_vs_three(w: Fraction, x: Fraction, y: Fraction, z: Fraction) -> int:
    """Compare ``sqrt(w)`` with ``sqrt(x) + sqrt(y) + sqrt(z)``."""
    head = _sign(w - x)
    if head < 0:
        return LESS
    if head == 0:
        return LESS if y + z > 0 else EQUAL
    c = w + x - y - z
    if c < 0 or (c == 0 and (w * x > 0 or y * z > 0)):
        return LESS
    if c == 0:
        return EQUAL
    return cmp_sqrt_sum(c * c / 4, Fraction(0), w * x, y * z)


@dataclass(frozen=True)
class QuadDistances:
    """Squared distances among four labelled points p, a, b, r."""

    pa: Fraction
    pb: Fraction
    pr: Fraction
    ab: Fraction
    ar: Fraction
    br: Fraction

    @classmethod
    def from_points(cls, p: Point, a: Point, b: Point, r: Point) -> "QuadDistances":
        from .model import sqdist
        return cls(sqdist(p, a), sqdist(p, b), sqdist(p, r),
                   sqdist(a, b), sqdist(a, r), sqdist(b, r))

    def swap_pr(self) -> "QuadDistances":
        return QuadDistances(self.ar, self.br, self.pr, self.ab, self.pa, self.pb)

    def swap_ab(self) -> "QuadDistances":
        return QuadDistances(self.pb, self.pa, self.pr, self.ab, self.br, self.ar)

    def areas16(self) -> dict[str, Fraction]:
        """16*area**2 of the triangle omitting each labelled point."""
        return {
            "p": heron16(self.ab, self.ar, self.br),
            "a": heron16(self.pb, self.pr, self.br),
            "b": heron16(self.pa, self.pr, self.ar),
            "r": heron16(self.pa, self.pb, self.ab),
        }

    def gram_det(self) -> Fraction:
        """8 * determinant of the Gram matrix of a-p, b-p, r-p; zero iff flat."""
        g11, g22, g33 = self.pa, self.pb, self.pr
        g12 = self.pa + self.pb - self.ab
        g13 = self.pa + self.pr - self.ar
        g23 = self.pb + self.pr - self.br
        # entries g12, g13, g23 are doubled; scale the diagonal to match.
        a, b, c = 2 * g11, 2 * g22, 2 * g33
        return a * (b * c - g23 * g23) - g12 * (g12 * c - g23 * g13) + g13 * (g12 * g23 - b * g13)


class ShapeKind(str, enum.Enum):
    CONVEX = "Convex"
    CONCAVE = "Concave"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class QuadShape:
    kind: ShapeKind
    inner: str | None = None

    def __str__(self):
        return f"Concave({self.inner})" if self.kind is ShapeKind.CONCAVE else self.kind.value


class SideResult(str, enum.Enum):
    SAME_SIDE = "SameSide"
    OPPOSITE_SIDE = "OppositeSide"
    INCONSISTENT = "Inconsistent"


CONVEX = QuadShape(ShapeKind.CONVEX)
INCONSISTENT = QuadShape(ShapeKind.INCONSISTENT)


@lru_cache(maxsize=1 << 16)
def quad_shape(q: QuadDistances) -> QuadShape:
    """Convex, Concave(inner point) or Inconsistent, from distances alone.

    A realisable quadruple has four non-negative triangle areas and a flat
    Gram matrix.  It is concave when one triangle's area is the sum of the
    other three (the omitted point sits inside it) and convex when two areas
    sum to the other two.  Four collinear points are reported as convex.
    """
    if min(q.pa, q.pb, q.pr, q.ab, q.ar, q.br) <= 0:
        return INCONSISTENT
    areas = q.areas16()
    if any(v < 0 for v in areas.values()) or q.gram_det() != 0:
        return INCONSISTENT
    if all(v == 0 for v in areas.values()):
        return CONVEX
    for w in "pabr":
        rest = [areas[x] for x in "pabr" if x != w]
        if cmp_one_vs_three(areas[w], *rest) == EQUAL:
            return QuadShape(ShapeKind.CONCAVE, w)
    ap, aa, ab, ar = areas["p"], areas["a"], areas["b"], areas["r"]
    if (cmp_sqrt_sum(ap, aa, ab, ar) == EQUAL or cmp_sqrt_sum(ap, ab, aa, ar) == EQUAL
            or cmp_sqrt_sum(ap, ar, aa, ab) == EQUAL):
        return CONVEX
    return INCONSISTENT


@lru_cache(maxsize=1 << 16)
def same_side(q: QuadDistances) -> SideResult:
    """Are p and r on the same side of the line through a and b?

    A point lying on the line counts as being on the same side.
    """
    shape = quad_shape(q)
    if shape.kind is ShapeKind.INCONSISTENT:
        return SideResult.INCONSISTENT
    if heron16(q.pa, q.pb, q.ab) == 0 or heron16(q.ab, q.ar, q.br) == 0:
        return SideResult.SAME_SIDE
    if shape.kind is ShapeKind.CONCAVE:
        return SideResult.OPPOSITE_SIDE if shape.inner in ("a", "b") else SideResult.SAME_SIDE
    # convex: p and r are opposite corners iff |pr| + |ab| is the strictly
    # largest of the three sums of opposite pairs.
    if cmp_sqrt_sum(q.pr, q.ab, q.ar, q.pb) > 0 and cmp_sqrt_sum(q.pr, q.ab, q.br, q.pa) > 0:
        return SideResult.OPPOSITE_SIDE
    return SideResult.SAME_SIDE


def on_line(ab: Fraction, ap: Fraction, bp: Fraction) -> bool:
    """p lies on the line through a and b (given the three squared lengths)."""
    return heron16(ab, ap, bp) == 0


# ---------------------------------------------------------------------------
# coordinate predicates


def orient(a: Point, b: Point, c: Point) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Counter-clockwise hull vertices, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 2 else pts[:1] + pts[-1:]


def _weakly_separated(A: Sequence[Point], B: Sequence[Point]) -> bool:
    pts = list(A) + list(B)
    base = pts[0]
    far = next((p for p in pts if p != base), None)
    if far is None:
        return False
    if all(orient(base, far, p) == 0 for p in pts):
        # everything on one line: separable iff the projections do not overlap
        d = (far[0] - base[0], far[1] - base[1])

        def proj(p):
            return p[0] * d[0] + p[1] * d[1]

        pa = [proj(p) for p in A]
        pb = [proj(p) for p in B]
        return max(pa) <= min(pb) or max(pb) <= min(pa)
    cand = convex_hull(A) + convex_hull(B)
    for i in range(len(cand)):
        for j in range(i + 1, len(cand)):
            u, v = cand[i], cand[j]
            if u == v:
                continue
            sa = {_sign(orient(u, v, p)) for p in A} - {0}
            sb = {_sign(orient(u, v, p)) for p in B} - {0}
            if len(sa) <= 1 and len(sb) <= 1 and not (sa and sa == sb):
                return True
    return False


def hulls_overlap(A: Sequence[Point], B: Sequence[Point]) -> bool:
    """True unless some line has ``A`` on one closed side and ``B`` on the other.

    A separating line that contains every point of both sets does not count,
    so collinear overlapping segments overlap.  Touching at a single point
    does not.
    """
    if not A or not B:
        return False
    return not _weakly_separated(A, B)
