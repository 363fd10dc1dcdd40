"""Rate-region polytopes: per-parameter polymatroid intersections, the
decode-and-forward region as a union over power splits, and the cutset outer
region with its time-sharing closure. Two-user regions export as convex
polygons with a deterministic vertex order."""

import itertools
from dataclasses import dataclass

import numpy as np

from .bounds import (
    CorrelationVector,
    DfPowerSplit,
    DomainError,
    dest_cutset_function,
    dest_df_function,
    outer_bound_dest,
    outer_bound_relay,
    relay_cutset_function,
    relay_df_function,
)
from .polymatroid import SubsetFunction

# Orientation predicate epsilon for the planar hull; collinear-within-epsilon
# points are dropped so vertex lists stay minimal and deterministic.
HULL_EPS = 1e-12

RELAY = "relay"
DEST = "dest"

# Relay power splits probed alongside the destination-optimal one when
# sweeping the two-user decode-and-forward region.
BOUNDARY_BETAS = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5))


@dataclass(frozen=True)
class TimeSharingMixture:
    """Convex combination of at most K+1 correlation operating points."""

    points: tuple

    def __post_init__(self):
        pts = tuple((vec if isinstance(vec, CorrelationVector) else CorrelationVector(tuple(vec)), float(w))
                    for vec, w in self.points)
        if not pts:
            raise DomainError("a mixture needs at least one point")
        K = len(pts[0][0].gamma)
        if len(pts) > K + 1:
            raise DomainError(f"{len(pts)} mixture points exceed the cap of K+1={K + 1}")
        for _, w in pts:
            if w < -1e-12:
                raise DomainError(f"negative mixture weight {w!r}")
        total = sum(w for _, w in pts)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"mixture weights sum to {total!r}, expected 1")
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class RegionPolytope:
    K: int
    vertices: np.ndarray
    facets: tuple | None = None

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=np.float64))
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def max_sum(self):
        return float(self.vertices.sum(axis=1).max())


def mixture_bound(config, mixture, receiver, S):
    """Weighted average of one cutset bound across the mixture points."""
    if receiver == RELAY:
        bound = outer_bound_relay
    elif receiver == DEST:
        bound = outer_bound_dest
    else:
        raise DomainError(f"unknown receiver {receiver!r}")
    return sum(w * bound(config, vec, S) for vec, w in mixture.points)


def _family_pair(config, params):
    if isinstance(params, CorrelationVector):
        return dest_cutset_function(config, params), relay_cutset_function(config, params)
    if isinstance(params, DfPowerSplit):
        return dest_df_function(config, params), relay_df_function(config, params)
    if isinstance(params, TimeSharingMixture):
        n = 1 << config.K
        f1 = np.zeros(n)
        f2 = np.zeros(n)
        for vec, w in params.points:
            f1 += w * dest_cutset_function(config, vec).values
            f2 += w * relay_cutset_function(config, vec).values
        return SubsetFunction(config.K, f1), SubsetFunction(config.K, f2)
    raise DomainError(f"unsupported parameter type {type(params).__name__}")


def build_intersection(config, params):
    """Polytope cut out by both bound families of one parameter choice.

    Two-user polytopes list exact vertices in hull order; K <= 5 falls back
    to exhaustive tight-constraint basis enumeration.
    """
    f1, f2 = _family_pair(config, params)
    g = np.minimum(f1.values, f2.values)
    facets = tuple((mask, float(g[mask])) for mask in range(1, 1 << config.K))
    if config.K == 2:
        cands = _pentagon_candidates(g[0b01], g[0b10], g[0b11])
        verts = convex_hull(np.array(cands))
        return RegionPolytope(2, verts, facets)
    if config.K > 5:
        raise DomainError("vertex enumeration supports K <= 5")
    verts = _basis_vertices(config.K, g)
    return RegionPolytope(config.K, verts, facets)


def _pentagon_candidates(g1, g2, g12):
    pts = [(0.0, 0.0), (min(g1, g12), 0.0), (0.0, min(g2, g12))]
    if g1 + g2 <= g12:
        pts.append((g1, g2))
    else:
        if 0.0 <= g12 - g1 <= g2:
            pts.append((g1, g12 - g1))
        if 0.0 <= g12 - g2 <= g1:
            pts.append((g12 - g2, g2))
    return pts


def _basis_vertices(K, g, chunk=200000):
    rows = []
    rhs = []
    for mask in range(1, 1 << K):
        rows.append([1.0 if mask >> k & 1 else 0.0 for k in range(K)])
        rhs.append(g[mask])
    for k in range(K):
        row = [0.0] * K
        row[k] = 1.0
        rows.append(row)
        rhs.append(0.0)
    rows = np.asarray(rows)
    rhs = np.asarray(rhs)
    combos = np.array(list(itertools.combinations(range(len(rows)), K)))
    verts = []
    for lo in range(0, len(combos), chunk):
        idx = combos[lo : lo + chunk]
        A = rows[idx]
        b = rhs[idx]
        dets = np.abs(np.linalg.det(A))
        ok = dets > 1e-9
        if not ok.any():
            continue
        sol = np.linalg.solve(A[ok], b[ok][..., None])[..., 0]
        feas = np.all(sol >= -1e-9, axis=1)
        feas &= np.all(sol @ rows[: (1 << K) - 1].T <= g[1:] + 1e-9, axis=1)
        verts.append(sol[feas])
    if not verts:
        return np.zeros((1, K))
    verts = np.vstack(verts)
    verts = np.unique(np.round(verts, 9), axis=0)
    return verts


def _df_pentagon_grid(config, n):
    """Candidate vertices of every lattice power split's intersection."""
    P1, P2 = config.P
    Pr, Nr, Nd = config.P_r, config.N_r, config.N_d
    steps = np.arange(n + 1) / n
    a1, a2 = (x.ravel() for x in np.meshgrid(steps, steps, indexing="ij"))
    betas = [np.stack(np.broadcast_arrays(*beta_star_grid(config, a1, a2)), axis=1)]
    for b in BOUNDARY_BETAS:
        betas.append(np.broadcast_to(np.asarray(b), (a1.size, 2)))
    cands = []
    for bpair in betas:
        b1, b2 = bpair[:, 0], bpair[:, 1]
        i1 = 0.5 * np.log2(1.0 + a1 * P1 / Nr)
        i2 = 0.5 * np.log2(1.0 + a2 * P2 / Nr)
        i12 = 0.5 * np.log2(1.0 + (a1 * P1 + a2 * P2) / Nr)
        coh1 = 2.0 * np.sqrt((1.0 - a1) * b1 * P1 * Pr)
        coh2 = 2.0 * np.sqrt((1.0 - a2) * b2 * P2 * Pr)
        d1 = 0.5 * np.log2(1.0 + (P1 + (1.0 - b2) * Pr + coh1) / Nd)
        d2 = 0.5 * np.log2(1.0 + (P2 + (1.0 - b1) * Pr + coh2) / Nd)
        d12 = 0.5 * np.log2(1.0 + (P1 + P2 + Pr + coh1 + coh2) / Nd)
        cands.append(_pentagon_candidates_batch(np.minimum(i1, d1), np.minimum(i2, d2), np.minimum(i12, d12)))
    return np.vstack(cands)


def beta_star_grid(config, a1, a2):
    P1, P2 = config.P
    w1 = (1.0 - a1) * P1
    w2 = (1.0 - a2) * P2
    total = w1 + w2
    safe = np.where(total < 1e-300, 1.0, total)
    return np.where(total < 1e-300, 0.0, w1 / safe), np.where(total < 1e-300, 0.0, w2 / safe)


def _pentagon_candidates_batch(g1, g2, g12):
    zero = np.zeros_like(g1)
    pts = [
        np.stack([np.minimum(g1, g12), zero], axis=1),
        np.stack([zero, np.minimum(g2, g12)], axis=1),
    ]
    rect = g1 + g2 <= g12
    pts.append(np.stack([np.where(rect, g1, np.nan), np.where(rect, g2, np.nan)], axis=1))
    c_ok = ~rect & (g12 - g1 >= 0.0) & (g12 - g1 <= g2)
    pts.append(np.stack([np.where(c_ok, g1, np.nan), np.where(c_ok, g12 - g1, np.nan)], axis=1))
    d_ok = ~rect & (g12 - g2 >= 0.0) & (g12 - g2 <= g1)
    pts.append(np.stack([np.where(d_ok, g12 - g2, np.nan), np.where(d_ok, g2, np.nan)], axis=1))
    out = np.vstack(pts)
    return out[~np.isnan(out).any(axis=1)]


def _outer_pentagon_grid(config, n):
    P1, P2 = config.P
    Pr, Nr, Nd = config.P_r, config.N_r, config.N_d
    ij = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]
    g1 = np.array([i / n for i, _ in ij])
    g2 = np.array([j / n for _, j in ij])
    s1 = np.sqrt(g1 * P1)
    s2 = np.sqrt(g2 * P2)
    ubar1 = 1.0 - g2
    ubar2 = 1.0 - g1
    # Relay bounds: exact branch switch when the complement mass is 1.
    r1 = np.where(np.abs(g2 - 1.0) <= 1e-12, P1, P1 - s1 * s1 / np.where(ubar1 <= 0, 1.0, ubar1)) / Nr
    r2 = np.where(np.abs(g1 - 1.0) <= 1e-12, P2, P2 - s2 * s2 / np.where(ubar2 <= 0, 1.0, ubar2)) / Nr
    r12 = (P1 + P2 - (s1 + s2) ** 2) / Nr
    d1 = (P1 + ubar1 * Pr + 2.0 * s1 * np.sqrt(Pr)) / Nd
    d2 = (P2 + ubar2 * Pr + 2.0 * s2 * np.sqrt(Pr)) / Nd
    d12 = (P1 + P2 + Pr + 2.0 * (s1 + s2) * np.sqrt(Pr)) / Nd
    cap = lambda snr: 0.5 * np.log2(1.0 + np.maximum(snr, 0.0))
    return _pentagon_candidates_batch(
        np.minimum(cap(r1), cap(d1)), np.minimum(cap(r2), cap(d2)), np.minimum(cap(r12), cap(d12))
    )


def build_df_region(config, grid_resolution=0.02):
    """Two-user decode-and-forward region: hull of the per-split
    intersections over a power-split lattice. The region is convex, so the
    hull converges to it from inside as the lattice refines."""
    _require_two_user(config, grid_resolution)
    n = max(1, round(1.0 / grid_resolution))
    verts = convex_hull(_df_pentagon_grid(config, n))
    return RegionPolytope(2, verts)


def build_outer_region(config, grid_resolution=0.02):
    """Two-user cutset outer region: hull over the correlation lattice. The
    hull realizes the time-sharing closure, which in the plane equals the
    set of at-most-3-point mixtures."""
    _require_two_user(config, grid_resolution)
    n = max(1, round(1.0 / grid_resolution))
    verts = convex_hull(_outer_pentagon_grid(config, n))
    return RegionPolytope(2, verts)


def _require_two_user(config, grid_resolution):
    if config.K != 2:
        raise DomainError("polygon export supports K=2 only")
    if grid_resolution <= 0 or grid_resolution > 1:
        raise DomainError(f"grid resolution must be in (0, 1], got {grid_resolution!r}")


def convex_hull(points):
    """Andrew monotone-chain hull, counterclockwise from the
    lexicographically smallest vertex; collinear points dropped."""
    pts = np.unique(np.asarray(points, dtype=np.float64), axis=0)
    if len(pts) <= 2:
        return pts
    cross = lambda o, a, b: (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= HULL_EPS:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= HULL_EPS:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def polygon_area(vertices):
    v = np.asarray(vertices, dtype=np.float64)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_contains(vertices, point, tol=1e-9):
    """Membership test for a counterclockwise convex polygon."""
    v = np.asarray(vertices, dtype=np.float64)
    p = np.asarray(point, dtype=np.float64)
    if len(v) == 1:
        return bool(np.all(np.abs(v[0] - p) <= tol))
    nxt = np.roll(v, -1, axis=0)
    cross = (nxt[:, 0] - v[:, 0]) * (p[1] - v[:, 1]) - (nxt[:, 1] - v[:, 1]) * (p[0] - v[:, 0])
    return bool(np.all(cross >= -tol))


def _point_segment_distance(p, a, b):
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def point_polygon_distance(vertices, point):
    v = np.asarray(vertices, dtype=np.float64)
    p = np.asarray(point, dtype=np.float64)
    if len(v) >= 3 and polygon_contains(v, p, tol=0.0):
        return 0.0
    if len(v) == 1:
        return float(np.linalg.norm(v[0] - p))
    nxt = np.roll(v, -1, axis=0)
    return min(_point_segment_distance(p, a, b) for a, b in zip(v, nxt))


def hausdorff_distance(poly_a, poly_b):
    """Hausdorff distance between two convex polygons (vertex-attained)."""
    a = np.atleast_2d(poly_a)
    b = np.atleast_2d(poly_b)
    d_ab = max(point_polygon_distance(b, p) for p in a)
    d_ba = max(point_polygon_distance(a, p) for p in b)
    return max(d_ab, d_ba)
