import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from spectra.exceptions import AllCollinear, CollinearTriple, DomainError, NotConvex
from spectra.polygeom import (
    ConvexPolygon,
    affine_normalize,
    batch_is_convex,
    batch_triangle_ratio,
    det3,
    double_area,
    extremal_hexagon,
    extremal_pentagon,
    fan_double_area,
    gamma,
    max_triangle,
    random_convex_polygon,
    random_convex_polygons,
    search_max_ratio,
    triangle_ratio,
    unit_square,
)

coord = st.floats(-100, 100, allow_nan=False)
point = st.tuples(coord, coord)


def exact_shoelace(pts):
    n = len(pts)
    return sum(pts[i][0] * pts[(i + 1) % n][1] - pts[i][1] * pts[(i + 1) % n][0] for i in range(n))


def exact_det3(P, Q, R):
    return (Q[0] - P[0]) * (R[1] - P[1]) - (Q[1] - P[1]) * (R[0] - P[0])


def brute_max_triangle(V, density=16):
    """Oracle: best triangle over vertices and points sampled along every edge."""
    n = len(V)
    pts = [V[i] + s / density * (V[(i + 1) % n] - V[i]) for i in range(n) for s in range(density)]
    return max(abs(det3(a, b, c)) for a, b, c in combinations(pts, 3))


# ---- det3 and areas --------------------------------------------------------

def test_det3_examples():
    assert det3((0, 0), (1, 0), (0, 1)) == 1.0
    assert det3((0, 0), (0, 1), (1, 0)) == -1.0
    assert det3((0, 0), (1, 1), (2, 2)) == 0.0


@settings(max_examples=200, deadline=None)
@given(point, point, point)
def test_det3_antisymmetric(P, Q, R):
    d = det3(P, Q, R)
    tol = 1e-9 * (1 + max(map(abs, P + Q + R))) ** 2
    assert abs(det3(Q, P, R) + d) <= tol
    assert abs(det3(Q, R, P) - d) <= tol


@settings(max_examples=200, deadline=None)
@given(point, point, point, point)
def test_det3_translation_invariant(P, Q, R, s):
    shift = lambda X: (X[0] + s[0], X[1] + s[1])  # noqa: E731
    tol = 1e-8 * (1 + max(map(abs, P + Q + R + s))) ** 2
    assert abs(det3(shift(P), shift(Q), shift(R)) - det3(P, Q, R)) <= tol


def test_fan_equals_shoelace():
    for seed in range(50):
        poly = random_convex_polygon(3 + seed % 10, seed)
        assert fan_double_area(poly) == pytest.approx(double_area(poly), rel=1e-12)


def test_square_area():
    assert double_area(unit_square()) == 2.0
    assert triangle_ratio(unit_square()).ratio == 2.0


def test_hexagon_exact_oracle():
    pts = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(5, 6), Fraction(2, 3)),
           (Fraction(0), Fraction(1)), (Fraction(-1, 4), Fraction(1)), (Fraction(-2, 3), Fraction(2, 3))]
    area = exact_shoelace(pts)
    best = max(abs(exact_det3(*t)) for t in combinations(pts, 3))
    assert area == Fraction(9, 4) and best == 1
    rep = triangle_ratio(extremal_hexagon())
    assert rep.polygon_double_area == pytest.approx(float(area), abs=1e-15)
    assert rep.ratio == pytest.approx(2.25, abs=1e-12)
    assert rep.best_triple == (0, 1, 3)


def test_pentagon_exact_oracle():
    g = (sympy.sqrt(5) - 1) / 2
    pts = [(0, 0), (1, 0), (1, g), (0, 1), (-g, g)]
    area = sympy.nsimplify(sympy.expand(exact_shoelace(pts)))
    dets = [sympy.expand(abs(exact_det3(*t))) for t in combinations(pts, 3)]
    assert sympy.simplify(max(dets, key=float) - 1) == 0
    assert sympy.simplify(area - sympy.sqrt(5)) == 0
    poly = extremal_pentagon()
    assert triangle_ratio(poly).ratio == pytest.approx(math.sqrt(5), abs=1e-12)
    V = poly.vertices
    assert all(abs(det3(*(V[s] for s in t))) <= 1 + 1e-12 for t in combinations(range(5), 3))


# ---- max_triangle ----------------------------------------------------------

def test_max_triangle_matches_brute_force_with_edge_points():
    for seed in range(40):
        poly = random_convex_polygon(3 + seed % 6, seed)
        _, best = max_triangle(poly)
        assert brute_max_triangle(poly.vertices) <= best * (1 + 1e-12)


def test_max_triangle_matches_exhaustive_scan():
    rng = np.random.default_rng(3)
    for V in random_convex_polygons(60, 7, rng, method="valtr"):
        poly = ConvexPolygon(V)
        triple, best = max_triangle(poly)
        scan = max(abs(det3(V[i], V[j], V[k])) for i, j, k in combinations(range(7), 3))
        assert best == pytest.approx(scan, rel=1e-13)
        assert abs(det3(*(V[s] for s in triple))) == pytest.approx(best, rel=1e-13)


def test_max_triangle_tie_breaks_lexicographically():
    triple, best = max_triangle(unit_square())
    assert triple == (0, 1, 2) and best == 1.0


def test_max_triangle_all_collinear():
    # zero area is rejected at construction
    with pytest.raises(NotConvex):
        ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]), degenerate_ok=True)
    with pytest.raises(AllCollinear):
        max_triangle(_Unchecked(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])))


class _Unchecked:
    # bypasses ConvexPolygon validation to reach the AllCollinear guard
    def __init__(self, V):
        self.vertices = V
        self.scale = float(np.abs(V).max())


# ---- ratios ----------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_ratio_bound_random(n):
    rng = np.random.default_rng(n)
    for method in ("circle", "valtr"):
        V = random_convex_polygons(5000, n, rng, method=method)
        r = batch_triangle_ratio(V)
        assert r.min() >= 1 - 1e-12
        assert r.max() <= gamma(n) + 1e-9


def test_n3_ratio_is_one():
    for seed in range(20):
        assert triangle_ratio(random_convex_polygon(3, seed)).ratio == pytest.approx(1.0, abs=1e-12)


def test_batch_ratio_matches_single():
    rng = np.random.default_rng(9)
    V = random_convex_polygons(30, 6, rng)
    r = batch_triangle_ratio(V)
    for Vi, ri in zip(V, r):
        assert triangle_ratio(ConvexPolygon(Vi)).ratio == pytest.approx(ri, rel=1e-13)


def test_gamma_values():
    assert [gamma(n) for n in (3, 4, 5, 6, 7, 64)] == [1.0, 2.0, math.sqrt(5), 2.25, 2.25, 2.25]
    for bad in (0, 2):
        with pytest.raises(DomainError):
            gamma(bad)


# ---- affine normalisation --------------------------------------------------

def test_affine_normalize_invariance():
    rng = np.random.default_rng(1)
    for seed in range(30):
        poly = random_convex_polygon(3 + seed % 6, seed)
        triple = tuple(sorted(rng.choice(poly.n, 3, replace=False)))
        out = affine_normalize(poly, triple)
        assert triangle_ratio(out).ratio == pytest.approx(triangle_ratio(poly).ratio, rel=1e-10)
        assert np.array_equal(out.vertices[list(triple)], [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


def test_affine_normalize_clockwise_triple_keeps_ccw():
    poly = random_convex_polygon(6, 4)
    out = affine_normalize(poly, (0, 3, 1))
    assert batch_is_convex(out.vertices)
    assert triangle_ratio(out).ratio == pytest.approx(triangle_ratio(poly).ratio, rel=1e-10)


def test_hexagon_is_fixed_point():
    H = extremal_hexagon()
    out = affine_normalize(H, (0, 1, 3))
    assert np.allclose(out.vertices, H.vertices, atol=1e-15)


def test_affine_normalize_collinear():
    poly = ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0]]), degenerate_ok=True)
    with pytest.raises(CollinearTriple):
        affine_normalize(poly, (0, 1, 2))
    with pytest.raises(CollinearTriple):
        affine_normalize(poly, (0, 0, 1))


# ---- validation ------------------------------------------------------------

def test_rejects_clockwise_and_star():
    sq = unit_square().vertices
    with pytest.raises(NotConvex):
        ConvexPolygon(sq[::-1])
    star = np.array([[math.cos(4 * math.pi * k / 5), math.sin(4 * math.pi * k / 5)] for k in range(5)])
    assert not batch_is_convex(star)
    with pytest.raises(NotConvex):
        ConvexPolygon(star)
    with pytest.raises(NotConvex):
        ConvexPolygon(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.2], [2.0, 2.0], [0.0, 2.0]]))


def test_vertex_count_limits():
    with pytest.raises(DomainError):
        ConvexPolygon(np.zeros((2, 2)))
    ring = np.array([[math.cos(2 * math.pi * k / 65), math.sin(2 * math.pi * k / 65)] for k in range(65)])
    with pytest.raises(DomainError):
        ConvexPolygon(ring)


def test_degenerate_flag_and_nondegenerate():
    V = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [2.0, 2.0], [2.0, 2.0], [0.0, 2.0]])
    with pytest.raises(NotConvex):
        ConvexPolygon(V)
    poly = ConvexPolygon(V, degenerate_ok=True)
    clean = poly.nondegenerate()
    assert clean.n == 4
    assert double_area(clean) == double_area(poly) == 8.0
    assert triangle_ratio(poly).ratio == triangle_ratio(clean).ratio == 2.0


def test_json_roundtrip():
    poly = extremal_pentagon()
    back = ConvexPolygon.from_json(poly.to_json())
    assert np.array_equal(back.vertices, poly.vertices)


def test_vertices_immutable():
    with pytest.raises(ValueError):
        unit_square().vertices[0, 0] = 5.0


# ---- generation and search -------------------------------------------------

def test_random_polygon_deterministic_and_scaled():
    a = random_convex_polygon(7, 11)
    b = random_convex_polygon(7, 11)
    assert np.array_equal(a.vertices, b.vertices)
    c = random_convex_polygon(7, 11, scale=3.0)
    assert np.allclose(c.vertices, 3.0 * a.vertices)
    assert not np.array_equal(random_convex_polygon(7, 12).vertices, a.vertices)


@pytest.mark.parametrize("method", ["circle", "valtr"])
def test_batch_generator_convex(method):
    V = random_convex_polygons(500, 9, np.random.default_rng(0), method=method)
    assert V.shape == (500, 9, 2) and batch_is_convex(V).all()


def test_search_small_budget():
    res = search_max_ratio(5, restarts=4, iters=150, seed=3)
    assert 1.0 <= res.best_ratio <= math.sqrt(5) + 1e-9
    assert res.best_ratio == pytest.approx(triangle_ratio(res.best_polygon).ratio, rel=1e-12)
    assert [r for _, r in res.trace] == sorted(r for _, r in res.trace)
    assert len(res.trace) == 151 and res.restart_ratios.shape == (4,)


def test_search_deterministic():
    a = search_max_ratio(4, restarts=3, iters=50, seed=1)
    b = search_max_ratio(4, restarts=3, iters=50, seed=1)
    assert a.trace == b.trace and np.array_equal(a.best_polygon.vertices, b.best_polygon.vertices)


def test_search_n7_runs():
    res = search_max_ratio(7, restarts=3, iters=60, seed=0)
    assert res.best_ratio >= 1.0 and res.best_polygon.n == 7


def test_search_domain():
    with pytest.raises(DomainError):
        search_max_ratio(9)
    with pytest.raises(DomainError):
        search_max_ratio(5, restarts=0)


def test_permuted_start_changes_nothing_for_ratio():
    poly = random_convex_polygon(6, 2)
    V = poly.vertices
    for shift in range(6):
        rolled = ConvexPolygon(np.roll(V, shift, axis=0))
        assert triangle_ratio(rolled).ratio == pytest.approx(triangle_ratio(poly).ratio, rel=1e-12)
