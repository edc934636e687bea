"""Convex polygons and the ratio of polygon area to largest inscribed triangle.

For a convex n-gon the ratio is at most 1, 2, sqrt(5), 9/4 for n = 3..6 and
those bounds are attained. The largest triangle inside a convex polygon
always has its corners at polygon vertices, so every maximum here is an
exhaustive scan over vertex triples.

All areas are *double* areas (the value of ``det3``), which keeps the
arithmetic free of halves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
import math

import numpy as np

from .exceptions import AllCollinear, CollinearTriple, DomainError, GenerationFailed, NotConvex
from .validation import check_points

__all__ = [
    "ConvexPolygon",
    "RatioReport",
    "SearchResult",
    "det3",
    "double_area",
    "fan_double_area",
    "triangle_double_areas",
    "max_triangle",
    "triangle_ratio",
    "gamma",
    "extremal_pentagon",
    "extremal_hexagon",
    "unit_square",
    "affine_normalize",
    "random_convex_polygon",
    "random_convex_polygons",
    "batch_is_convex",
    "batch_triangle_ratio",
    "search_max_ratio",
]

CONVEX_RTOL = 1e-12


def _turns(V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # cross and dot of consecutive edge vectors, for arrays of shape (..., n, 2);
    # a zero-length edge (repeated vertex) is replaced by the previous nonzero edge
    E = np.roll(V, -1, axis=-2) - V
    n = E.shape[-2]
    idx = np.where(np.any(E != 0, axis=-1), np.arange(n), -1)
    idx = np.maximum.accumulate(idx, axis=-1)
    idx = np.where(idx < 0, idx[..., -1:], idx) % n
    E = np.take_along_axis(E, idx[..., None], axis=-2)
    F = np.roll(E, -1, axis=-2)
    cross = E[..., 0] * F[..., 1] - E[..., 1] * F[..., 0]
    dot = E[..., 0] * F[..., 0] + E[..., 1] * F[..., 1]
    return cross, dot


def _scale(V: np.ndarray) -> np.ndarray:
    return np.maximum(np.abs(V).max(axis=(-2, -1)), 1e-300)


def batch_is_convex(V, *, strict: bool = True) -> np.ndarray:
    """Convex, counterclockwise and simple, for polygons stacked as ``(..., n, 2)``.

    ``strict`` requires every turn to be a left turn larger than
    ``1e-12 * scale**2``; otherwise collinear (zero) turns are accepted down to
    ``-1e-12 * scale**2``. ``scale`` is the largest coordinate magnitude.
    """
    V = np.asarray(V, dtype=float)
    cross, dot = _turns(V)
    tol = CONVEX_RTOL * _scale(V)[..., None] ** 2
    turns_ok = np.all(cross > tol, axis=-1) if strict else np.all(cross >= -tol, axis=-1)
    # a star polygon also turns left everywhere; total turning must be one revolution
    winding = np.arctan2(cross, dot).sum(axis=-1)
    return turns_ok & (np.abs(winding - 2 * np.pi) < 1e-6)


@dataclass(frozen=True)
class ConvexPolygon:
    """Counterclockwise convex polygon with 3 to 64 vertices.

    Collinear or repeated vertices are rejected unless ``degenerate_ok`` is
    set, in which case they are kept but ignored by :meth:`nondegenerate`.
    """

    vertices: np.ndarray
    degenerate_ok: bool = field(default=False)

    def __post_init__(self):
        V = check_points(self.vertices)
        V = V.copy()
        V.flags.writeable = False
        object.__setattr__(self, "vertices", V)
        if not batch_is_convex(V, strict=not self.degenerate_ok):
            raise NotConvex("vertices do not form a convex counterclockwise polygon")
        if not double_area(self) > 0:
            raise NotConvex("polygon has zero area")

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def scale(self) -> float:
        return float(np.abs(self.vertices).max())

    def nondegenerate(self) -> "ConvexPolygon":
        """Copy with collinear and repeated vertices dropped."""
        V = np.asarray(self.vertices)
        keep = list(range(len(V)))
        tol = CONVEX_RTOL * max(self.scale, 1e-300) ** 2
        changed = True
        while changed and len(keep) > 3:
            changed = False
            for pos, idx in enumerate(keep):
                prev, nxt = keep[pos - 1], keep[(pos + 1) % len(keep)]
                if abs(det3(V[prev], V[idx], V[nxt])) <= tol:
                    del keep[pos]
                    changed = True
                    break
        return ConvexPolygon(V[keep], degenerate_ok=False)

    def to_json(self) -> dict:
        return {"vertices": [[float(x), float(y)] for x, y in self.vertices]}

    @classmethod
    def from_json(cls, doc: dict, *, degenerate_ok: bool = False) -> "ConvexPolygon":
        return cls(np.asarray(doc["vertices"], dtype=float), degenerate_ok=degenerate_ok)


@dataclass(frozen=True)
class RatioReport:
    polygon_double_area: float
    best_triple: tuple[int, int, int]
    triangle_double_area: float
    ratio: float


def det3(P, Q, R) -> float:
    """``det [[1, 1, 1], [Px, Qx, Rx], [Py, Qy, Ry]]``: twice the signed area of PQR.

    Positive iff P, Q, R run counterclockwise.
    """
    return float((Q[0] - P[0]) * (R[1] - P[1]) - (Q[1] - P[1]) * (R[0] - P[0]))


def double_area(poly: ConvexPolygon) -> float:
    """Shoelace sum, taken relative to the first vertex to limit cancellation."""
    return float(_shoelace(np.asarray(poly.vertices)))


def _shoelace(V: np.ndarray) -> np.ndarray:
    V = V - V[..., :1, :]
    W = np.roll(V, -1, axis=-2)
    return np.sum(V[..., 0] * W[..., 1] - V[..., 1] * W[..., 0], axis=-1)


def fan_double_area(poly: ConvexPolygon) -> float:
    """Sum of ``det3(P_0, P_m, P_{m+1})`` over the fan from the first vertex."""
    V = poly.vertices
    return float(sum(det3(V[0], V[m], V[m + 1]) for m in range(1, len(V) - 1)))


@lru_cache(maxsize=None)
def _triples(n: int) -> np.ndarray:
    T = np.array(list(combinations(range(n), 3)), dtype=np.intp)
    T.flags.writeable = False
    return T


def triangle_double_areas(V) -> tuple[np.ndarray, np.ndarray]:
    """All vertex triples (lexicographic, ``i < j < k``) and their ``det3`` values.

    Works on a single ``(n, 2)`` array or a stack ``(..., n, 2)``; the value
    array then has shape ``(..., C(n, 3))``.
    """
    V = np.asarray(V, dtype=float)
    T = _triples(V.shape[-2])
    P, Q, R = V[..., T[:, 0], :], V[..., T[:, 1], :], V[..., T[:, 2], :]
    det = (Q[..., 0] - P[..., 0]) * (R[..., 1] - P[..., 1]) - (Q[..., 1] - P[..., 1]) * (R[..., 0] - P[..., 0])
    return T, det


def max_triangle(poly: ConvexPolygon) -> tuple[tuple[int, int, int], float]:
    """Largest vertex triangle as ``(triple, double_area)``.

    Values within ``1e-12 * scale**2`` of the maximum count as ties; the
    lexicographically smallest tied triple is returned.

    Raises
    ------
    AllCollinear
        If every triple is degenerate.
    """
    T, det = triangle_double_areas(poly.vertices)
    a = np.abs(det)
    top = a.max()
    if top <= CONVEX_RTOL * max(poly.scale, 1e-300) ** 2:
        raise AllCollinear("all vertices are collinear")
    k = int(np.argmax(a >= top - CONVEX_RTOL * poly.scale**2))
    return tuple(int(s) for s in T[k]), float(a[k])


def triangle_ratio(poly: ConvexPolygon) -> RatioReport:
    """Polygon area divided by the area of its largest inscribed triangle.

    Degenerate vertices do not change either area, so the computation runs on
    the polygon as given; ``best_triple`` indexes its vertex list.
    """
    area = double_area(poly)
    triple, tri = max_triangle(poly)
    return RatioReport(polygon_double_area=area, best_triple=triple, triangle_double_area=tri, ratio=area / tri)


def gamma(n: int) -> float:
    """Perron-shift factor for order ``n``: 1, 2, sqrt(5) for n = 3, 4, 5 and 2.25 beyond.

    For n <= 6 this is also the sharp bound on :func:`triangle_ratio` of a
    convex n-gon. For n >= 7 it is *only* the matrix-side constant: polygons
    with seven or more vertices can exceed 2.25.
    """
    n = int(n)
    if n < 3:
        raise DomainError(f"gamma is defined for n >= 3, got {n}")
    return {3: 1.0, 4: 2.0, 5: math.sqrt(5.0)}.get(n, 2.25)


def unit_square() -> ConvexPolygon:
    return ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))


def extremal_pentagon() -> ConvexPolygon:
    """Pentagon with area ratio exactly sqrt(5); every vertex triangle has double area <= 1."""
    g = (math.sqrt(5.0) - 1.0) / 2.0
    return ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, g], [0.0, 1.0], [-g, g]]))


def extremal_hexagon() -> ConvexPolygon:
    """Hexagon with area ratio exactly 9/4."""
    return ConvexPolygon(np.array([
        [0.0, 0.0], [1.0, 0.0], [5.0 / 6.0, 2.0 / 3.0], [0.0, 1.0], [-0.25, 1.0], [-2.0 / 3.0, 2.0 / 3.0],
    ]))


FIXTURES = {"square": unit_square, "pentagon": extremal_pentagon, "hexagon": extremal_hexagon}


def _affine_to_unit(V: np.ndarray, triple) -> np.ndarray:
    a, b, c = (V[..., s, :] for s in triple)
    M = np.stack([b - a, c - a], axis=-1)  # columns map e1, e2 to the triangle edges
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    inv = np.stack([np.stack([M[..., 1, 1], -M[..., 0, 1]], -1), np.stack([-M[..., 1, 0], M[..., 0, 0]], -1)], -2)
    inv = inv / det[..., None, None]
    return np.einsum("...ij,...kj->...ki", inv, V - a[..., None, :]), det


def affine_normalize(poly: ConvexPolygon, triple) -> ConvexPolygon:
    """Image of ``poly`` under the affine map sending ``triple`` to (0,0), (1,0), (0,1).

    If the triple is clockwise the map reverses orientation; the vertex list
    is then reversed (keeping the first vertex first) so the result is again
    counterclockwise. Area ratios are unchanged.

    Raises
    ------
    CollinearTriple
        If the three vertices are collinear.
    """
    V = np.asarray(poly.vertices)
    triple = tuple(int(s) for s in triple)
    if len(set(triple)) != 3:
        raise CollinearTriple(f"triple {triple} repeats a vertex")
    if abs(det3(*(V[s] for s in triple))) <= CONVEX_RTOL * max(poly.scale, 1e-300) ** 2:
        raise CollinearTriple(f"vertices {triple} are collinear")
    W, det = _affine_to_unit(V, triple)
    for s, target in zip(triple, ([0.0, 0.0], [1.0, 0.0], [0.0, 1.0])):
        W[s] = target  # remove rounding on the anchor points
    if det < 0:
        W = np.concatenate([W[:1], W[:0:-1]])
    return ConvexPolygon(W, degenerate_ok=poly.degenerate_ok)


def _circle_candidates(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    # Sorted random angles on a radially jittered circle, then a random linear map.
    jitter = min(0.35, 3.0 / n**2)
    theta = np.sort(rng.uniform(0.0, 2 * np.pi, size=(count, n)), axis=1)
    radius = 1.0 + rng.uniform(-jitter, jitter, size=(count, n))
    V = np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=-1)
    L = rng.normal(size=(count, 2, 2))
    detL = L[:, 0, 0] * L[:, 1, 1] - L[:, 0, 1] * L[:, 1, 0]
    L[detL < 0, :, 0] *= -1  # keep orientation
    return np.einsum("cij,ckj->cki", L, V)


def _valtr_increments(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    # Sorted coordinates split at random into two monotone chains from min to
    # max; increments along one chain are positive, along the other negative.
    c = np.sort(rng.random(size=(count, n)), axis=1)
    side = rng.random(size=(count, n - 2)) < 0.5
    out = np.empty((count, n))
    inc = {}
    for flag in (True, False):
        mask = np.concatenate([np.ones((count, 1), bool), side == flag, np.ones((count, 1), bool)], axis=1)
        # sorted input, so a running max over chain members is "previous chain value"
        prev = np.maximum.accumulate(np.where(mask, c, -np.inf), axis=1)
        inc[flag] = c[:, 1:] - prev[:, :-1]
    out[:, 1:-1] = np.where(side, inc[True][:, :-1], -inc[False][:, :-1])
    out[:, -1] = inc[True][:, -1]
    out[:, 0] = -inc[False][:, -1]
    return out


def _valtr_candidates(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    dx = _valtr_increments(rng, count, n)
    dy = _valtr_increments(rng, count, n)
    perm = np.argsort(rng.random(size=(count, n)), axis=1)
    dy = np.take_along_axis(dy, perm, axis=1)
    order = np.argsort(np.arctan2(dy, dx), axis=1)
    dx = np.take_along_axis(dx, order, axis=1)
    dy = np.take_along_axis(dy, order, axis=1)
    V = np.stack([np.cumsum(dx, axis=1), np.cumsum(dy, axis=1)], axis=-1)
    return V - V.mean(axis=1, keepdims=True)


def random_convex_polygons(count: int, n: int, rng: np.random.Generator, method: str = "circle") -> np.ndarray:
    """A stack of ``count`` strictly convex CCW n-gons, shape ``(count, n, 2)``.

    ``method="circle"`` jitters points on a circle and applies a random
    linear map; ``method="valtr"`` uses Valtr's chain construction, which
    spreads mass over far more irregular shapes. Rejected draws are replaced
    until ``count`` polygons are available.
    """
    if not 3 <= n <= 64:
        raise DomainError(f"n must lie in [3, 64], got {n}")
    make = {"circle": _circle_candidates, "valtr": _valtr_candidates}[method]
    out = []
    have = 0
    for _ in range(1000):
        V = make(rng, max(count - have, 16), n)
        V = V[batch_is_convex(V)]
        out.append(V)
        have += len(V)
        if have >= count:
            return np.concatenate(out)[:count]
    raise GenerationFailed(f"could not generate {count} convex {n}-gons")


def random_convex_polygon(n: int, seed: int = 0, scale: float = 1.0) -> ConvexPolygon:
    """Deterministic random strictly convex CCW n-gon.

    Points on a radially jittered circle (angles sorted, so hull order equals
    list order), redrawn until all ``n`` are hull vertices; coordinates are
    then multiplied by ``scale``.

    Raises
    ------
    GenerationFailed
        After 1000 rejected draws.
    """
    if not 3 <= n <= 64:
        raise DomainError(f"n must lie in [3, 64], got {n}")
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        V = _circle_candidates(rng, 1, n)[0] * scale
        if batch_is_convex(V):
            return ConvexPolygon(V)
    raise GenerationFailed(f"no convex {n}-gon after 1000 draws (seed={seed})")


def batch_triangle_ratio(V) -> np.ndarray:
    """:func:`triangle_ratio` for a stack ``(..., n, 2)``; no convexity check."""
    V = np.asarray(V, dtype=float)
    area = _shoelace(V)
    _, det = triangle_double_areas(V)
    return area / np.abs(det).max(axis=-1)


@dataclass(frozen=True)
class SearchResult:
    """Best polygon found by :func:`search_max_ratio`.

    ``trace`` holds ``(iteration, best ratio so far over all restarts)``.
    """

    best_polygon: ConvexPolygon
    best_ratio: float
    trace: list[tuple[int, float]]
    restart_ratios: np.ndarray


def _normalize_stack(V: np.ndarray) -> np.ndarray:
    # Send each polygon's largest triangle to the unit right triangle; ratios are affine invariant.
    T, det = triangle_double_areas(V)
    k = np.argmax(np.abs(det), axis=-1)
    tri = T[k]
    # make the anchor triple counterclockwise so orientation is preserved
    cw = det[np.arange(len(V)), k] < 0
    tri[cw] = tri[cw][:, [0, 2, 1]]
    rows = np.arange(len(V))
    a, b, c = V[rows, tri[:, 0]], V[rows, tri[:, 1]], V[rows, tri[:, 2]]
    M = np.stack([b - a, c - a], axis=-1)
    return np.einsum("rij,rkj->rki", np.linalg.inv(M), V - a[:, None, :])


# unit moves for one vertex: the axis directions plus the diagonals, which let a
# vertex slide along a ridge where two largest triangles tie
_COMPASS = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
                    + [[s * math.sqrt(0.5), t * math.sqrt(0.5)] for s in (1, -1) for t in (1, -1)])


def search_max_ratio(n: int, restarts: int = 50, iters: int = 2000, seed: int = 0, *,
                     init_step: float = 0.1, min_step: float = 1e-9) -> SearchResult:
    """Hill-climb :func:`triangle_ratio` over the vertex coordinates of convex n-gons.

    Each of the ``restarts`` slots starts from a :func:`random_convex_polygon`
    drawn from its own seed stream, normalised so its largest triangle is the
    unit right triangle. An iteration tries moving each vertex by ``step`` in
    each of the eight compass directions, keeps the best move if it raises the
    ratio and stays strictly convex, and otherwise halves ``step``. When
    ``step`` falls below ``min_step`` the climb has converged: the slot records
    its ratio and starts again from a fresh polygon of its stream, so the whole
    ``iters`` budget is spent climbing. Slots never interact, so the result
    depends only on ``(n, restarts, iters, seed)``.
    """
    if not 3 <= n <= 8:
        raise DomainError(f"search supports 3 <= n <= 8, got {n}")
    if restarts < 1 or iters < 1:
        raise DomainError("restarts and iters must be >= 1")
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(restarts)]

    def fresh(slot):
        return np.asarray(random_convex_polygon(n, int(streams[slot].integers(2**63))).vertices)

    V = _normalize_stack(np.stack([fresh(s) for s in range(restarts)]))
    ratio = batch_triangle_ratio(V)
    step = np.full(restarts, float(init_step))
    best_V = V.copy()
    best_ratio = ratio.copy()

    k = len(_COMPASS)
    moves = np.zeros((n * k, n, 2))
    for vert in range(n):
        moves[vert * k:(vert + 1) * k, vert] = _COMPASS

    rows = np.arange(restarts)
    trace = [(0, float(best_ratio.max()))]
    for it in range(1, iters + 1):
        cand = V[:, None] + step[:, None, None, None] * moves[None]
        r = np.where(batch_is_convex(cand), batch_triangle_ratio(cand), -np.inf)
        pick = np.argmax(r, axis=1)
        up = r[rows, pick] > ratio
        if np.any(up):
            V[up] = _normalize_stack(cand[up, pick[up]])
            ratio[up] = batch_triangle_ratio(V[up])
        step[~up] /= 2
        better = ratio > best_ratio
        best_V[better] = V[better]
        best_ratio[better] = ratio[better]
        done = np.flatnonzero(step < min_step)
        if done.size:
            V[done] = _normalize_stack(np.stack([fresh(s) for s in done]))
            ratio[done] = batch_triangle_ratio(V[done])
            step[done] = init_step
        trace.append((it, float(best_ratio.max())))

    top = int(np.argmax(best_ratio))
    return SearchResult(best_polygon=ConvexPolygon(best_V[top]), best_ratio=float(best_ratio[top]), trace=trace,
                        restart_ratios=best_ratio)
