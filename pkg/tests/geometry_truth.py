"""Coordinate ground truth for the distance-only predicates (tests only)."""

from fractions import Fraction


def orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def in_closed_triangle(p, a, b, c):
    s1, s2, s3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    has_neg = s1 < 0 or s2 < 0 or s3 < 0
    has_pos = s1 > 0 or s2 > 0 or s3 > 0
    return not (has_neg and has_pos)


def shape_truth(p, a, b, r):
    """'Convex', 'Concave(x)' as quad_shape would name it from coordinates."""
    pts = {"p": p, "a": a, "b": b, "r": r}
    names = "pabr"
    if all(orient(p, a, x) == 0 for x in (b, r)) and orient(p, b, r) == 0:
        return "Convex"
    for w in names:
        others = [pts[x] for x in names if x != w]
        if orient(*others) != 0 and in_closed_triangle(pts[w], *others):
            return f"Concave({w})"
    return "Convex"


def side_truth(p, a, b, r):
    sp, sr = orient(a, b, p), orient(a, b, r)
    if sp == 0 or sr == 0:
        return "SameSide"
    return "SameSide" if (sp > 0) == (sr > 0) else "OppositeSide"


def sq(p, q):
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def random_quad(rng, degenerate=False):
    while True:
        if degenerate:
            den = rng.choice([1, 2, 3])
            pts = [(Fraction(rng.randint(0, 4), den), Fraction(rng.randint(0, 4), den)) for _ in range(4)]
        else:
            den = rng.choice([7, 64, 1000, 1 << 20])
            pts = [(Fraction(rng.randint(-den, den), den), Fraction(rng.randint(-den, den), den)) for _ in range(4)]
        if len(set(pts)) == 4:
            return pts
