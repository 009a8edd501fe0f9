"""Distance-only geometry: shapes and sides decided from six squared lengths."""

from udgclique.predicates import QuadDistances, quad_shape, same_side

cases = {
    "kite with b inside": ((0, 0), (4, 0), (2, 1), (2, 3)),
    "3-4-5 rectangle, p/r diagonal": ((0, 0), (3, 0), (0, 4), (3, 4)),
    "unit square, p/r on one edge": ((0, 0), (1, 0), (1, 1), (0, 1)),
}
for name, pts in cases.items():
    q = QuadDistances.from_points(*pts)
    print(f"{name:32s} shape={quad_shape(q)!s:12s} side={same_side(q).value}")
