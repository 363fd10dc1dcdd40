"""Closed-form max-min sum-rate solver and rule-set scanner.

The K-user sum bounds at the relay and destination depend on the correlation
parameters only through one scalar statistic; the relay bound falls and the
destination bound rises in it, so the max-min is either the uncorrelated
relay bound (bottleneck) or the unique equalizing root of a quadratic. The
scanner walks the set of equalizing rules and classifies each induced
two-polymatroid intersection to decide whether the bound is attained.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bounds import (
    CorrelationVector,
    DfPowerSplit,
    DomainError,
    beta_star,
    dest_cutset_function,
    dest_df_function,
    df_to_correlation,
    relay_cutset_function,
    relay_df_function,
)
from .channel import awgn_capacity
from .polymatroid import ACTIVE, intersection_max_sum

BOTTLENECK = "Bottleneck"
EQUALIZED = "Equalized"
ACTIVE_CLASS = "ActiveClass"
INACTIVE_CLASS = "InactiveClass"
EXACT = "Exact"
UPPER_BOUND_ONLY = "UpperBoundOnly"

CONSTRAINT_TOL = 1e-10

# Classification budget for a K=2 sweep; finer grids are handled by a strided
# pass plus per-flip binary search on the full grid.
MAX_DENSE_CLASSIFY = 2001


@dataclass(frozen=True)
class MaxMinSolution:
    regime: str
    root: float
    sum_rate: float
    constraint_value: float
    K_coeffs: tuple


@dataclass(frozen=True)
class RuleSetScan:
    family: str
    resolution: float
    samples: tuple
    active_intervals: dict | None
    feasible_box: dict | None
    verdict: str


def bottleneck_check(config):
    """True when the source-relay link caps the sum-rate even without any
    source-relay correlation; the boundary case counts as bottleneck."""
    total = sum(config.P)
    return total / config.N_r <= (total + config.P_r) / config.N_d


def k_coefficients(config):
    total = sum(config.P)
    k0 = config.P_max / config.N_r
    k1 = math.sqrt(config.P_max * config.P_r) / config.N_d
    k2 = (total + config.P_r) / config.N_d
    k3 = total / config.N_r
    return (k0, k1, k2, k3)


def solve_equalizer(config):
    """Max-min of the two K-user sum bounds.

    Bottleneck regime: root 0, value C(sum(P)/N_r). Otherwise the root is the
    positive solution of K_0 x^2 + 2 K_1 x + K_2 - K_3 = 0, where the two
    bounds cross; the constraint value root^2 parameterizes the rule sets.
    """
    k0, k1, k2, k3 = k_coefficients(config)
    if bottleneck_check(config):
        return MaxMinSolution(BOTTLENECK, 0.0, awgn_capacity(k3), 0.0, (k0, k1, k2, k3))
    root = (-k1 + math.sqrt(k1 * k1 + (k3 - k2) * k0)) / k0
    c = root * root
    sum_rate = awgn_capacity(k3 - c * k0)
    gap = awgn_capacity(k2 + 2.0 * k1 * root) - sum_rate
    if abs(gap) > 1e-8:
        raise RuntimeError(f"equalizer gap {gap!r} at root {root!r}")
    return MaxMinSolution(EQUALIZED, root, sum_rate, c, (k0, k1, k2, k3))


def maxmin_rule_inner(config, solution, alpha):
    """Power split for an equalizing alpha: beta is the destination-optimal
    relay split. Requires sum_k lambda_k (1 - alpha_k) = constraint_value."""
    a = np.asarray(alpha, dtype=np.float64)
    lam = config.lam_vector()
    residual = float((lam * (1.0 - a)).sum()) - solution.constraint_value
    if abs(residual) > CONSTRAINT_TOL:
        raise DomainError(f"equalizer constraint violated, residual {residual:.3e}")
    return DfPowerSplit(tuple(a), tuple(beta_star(config, a)))


def gamma_rule_outer(config, solution, gamma):
    """Validated equalizing correlation vector: the correlation statistic
    sum_k sqrt(lambda_k gamma_k) must equal the root."""
    vec = CorrelationVector(tuple(gamma))
    if len(vec.gamma) != config.K:
        raise DomainError(f"gamma has {len(vec.gamma)} entries, expected {config.K}")
    lam = config.lam_vector()
    x = float(np.sqrt(lam * vec.vector()).sum())
    if abs(x - solution.root) > CONSTRAINT_TOL * max(1.0, solution.root):
        raise DomainError(f"equalizer constraint violated, residual {x - solution.root:.3e}")
    return vec


def classify_inner_rule(config, split):
    """Intersection outcome of the decode-and-forward polymatroid pair;
    destination family first (its subset indexes the case label)."""
    return intersection_max_sum(dest_df_function(config, split), relay_df_function(config, split))


def classify_outer_rule(config, gamma):
    """Intersection outcome of the cutset polymatroid pair."""
    return intersection_max_sum(dest_cutset_function(config, gamma), relay_cutset_function(config, gamma))


def inner_alpha1_interval(config, c):
    """Feasible alpha_1 interval of the K=2 equalizer constraint."""
    lam = config.lam
    lo = max(0.0, 1.0 - c / lam[0])
    hi = min(1.0, 1.0 - (c - lam[1]) / lam[0])
    return lo, hi

def inner_alpha2_of_alpha1(config, c, a1):
    lam = config.lam
    return 1.0 - (c - lam[0] * (1.0 - a1)) / lam[1]


def outer_gamma1_interval(config, root):
    """Feasible gamma_1 interval of the K=2 equalizer constraint (before the
    sum(gamma) <= 1 filter)."""
    lam = config.lam
    lo = 0.0
    if root > math.sqrt(lam[1]):
        lo = (root - math.sqrt(lam[1])) ** 2 / lam[0]
    hi = min(1.0, root * root / lam[0])
    return lo, hi

def outer_gamma2_of_gamma1(config, root, g1):
    lam = config.lam
    rem = root - math.sqrt(lam[0] * g1)
    return rem * rem / lam[1]


def _sweep_grid(lo, hi, resolution):
    # Integer multiples of the resolution inside the interval, plus the exact
    # endpoints; reported boundaries therefore sit on the resolution grid.
    first = math.ceil(lo / resolution - 1e-9)
    last = math.floor(hi / resolution + 1e-9)
    pts = [lo]
    pts.extend(i * resolution for i in range(first, last + 1) if lo < i * resolution < hi)
    if hi > lo:
        pts.append(hi)
    return pts

def _classify_sweep(points, classify):
    """Kinds of the sweep points; classify takes a grid index. Dense up to
    the budget, otherwise strided with per-flip binary search."""
    kinds = [None] * len(points)

    def kind_at(i):
        if kinds[i] is None:
            kinds[i] = classify(i).kind
        return kinds[i]

    stride = max(1, (len(points) - 1) // (MAX_DENSE_CLASSIFY - 1)) if len(points) > 1 else 1
    probes = list(range(0, len(points), stride))
    if probes[-1] != len(points) - 1:
        probes.append(len(points) - 1)
    for i in probes:
        kind_at(i)
    for a, b in zip(probes, probes[1:]):
        if kind_at(a) == kind_at(b):
            continue
        # One flip assumed per probed bracket; locate it on the full grid.
        lo, hi = a, b
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if kind_at(mid) == kinds[a]:
                lo = mid
            else:
                hi = mid
    return kinds

def _active_runs(points, kinds):
    runs = []
    start = None
    prev = None
    for i, (p, k) in enumerate(zip(points, kinds)):
        if k == ACTIVE:
            if start is None:
                start = p
            prev = p
        elif k is not None:
            if start is not None:
                runs.append((start, prev))
                start = None
        # Unclassified points inside a strided run inherit their bracket's
        # uniform kind; flips were refined, so None never borders a change.
        elif start is not None:
            prev = p
    if start is not None:
        runs.append((start, prev))
    return runs


def scan_active_rules(config, solution, resolution=1e-3, family="inner", seed=0):
    """Classify the equalizing rule set and report where it is active.

    For K=2 the rule set is one-dimensional: the first coordinate sweeps the
    grid of resolution multiples inside its feasible interval (exact
    endpoints included) and the second is solved from the constraint. Runs
    of certified-Active grid points become the reported intervals, so the
    boundary localization error is at most the resolution. For K>2 the
    constraint slice is sampled (seeded Dirichlet plus a simplex lattice) and
    only the verdict is interval-free.

    Args:
        family: 'inner' scans power splits, 'outer' scans correlations.
    """
    if solution.regime != EQUALIZED:
        raise DomainError("rule-set scan applies to the Equalized regime only")
    if resolution <= 0:
        raise DomainError(f"resolution must be positive, got {resolution!r}")
    if family not in ("inner", "outer"):
        raise DomainError(f"unknown family {family!r}")
    if config.K == 2:
        return _scan_two_user(config, solution, resolution, family)
    return _scan_sampled(config, solution, family, seed)


def _scan_two_user(config, solution, resolution, family):
    c = solution.constraint_value
    if family == "inner":
        lo, hi = inner_alpha1_interval(config, c)
        points = _sweep_grid(lo, hi, resolution)
        partner_of = lambda p: inner_alpha2_of_alpha1(config, c, p)
        rules = [
            DfPowerSplit((p, partner_of(p)), tuple(beta_star(config, (p, partner_of(p)))))
            for p in points
        ]
        kinds = _classify_sweep(points, lambda i: classify_inner_rule(config, rules[i]))
        names = ("alpha1", "alpha2")
    else:
        lo, hi = outer_gamma1_interval(config, solution.root)
        partner_of = lambda p: outer_gamma2_of_gamma1(config, solution.root, p)
        points = [
            p
            for p in _sweep_grid(lo, hi, resolution)
            if partner_of(p) <= 1.0 + 1e-12 and p + partner_of(p) <= 1.0 + 1e-12
        ]
        rules = [CorrelationVector((p, min(partner_of(p), 1.0))) for p in points]
        kinds = _classify_sweep(points, lambda i: classify_outer_rule(config, rules[i]))
        names = ("gamma1", "gamma2")
    runs = _active_runs(points, kinds)
    # The partner coordinate decreases along the sweep, so runs map reversed.
    partner_runs = sorted((partner_of(b), partner_of(a)) for a, b in runs)
    intervals = {names[0]: runs, names[1]: partner_runs}
    box = None
    if points:
        box = {
            names[0]: (points[0], points[-1]),
            names[1]: (partner_of(points[-1]), partner_of(points[0])),
        }
    samples = tuple((rules[i], kinds[i]) for i in range(len(points)) if kinds[i] is not None)
    verdict = ACTIVE_CLASS if runs else INACTIVE_CLASS
    return RuleSetScan(family, resolution, samples, intervals, box, verdict)


def _scan_sampled(config, solution, family, seed, n_random=10000):
    c = solution.constraint_value
    root = solution.root
    lam = config.lam_vector()
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(config.K), size=n_random)
    lattice = _simplex_lattice(config.K, 8)
    samples = []
    any_active = False
    for w in np.vstack([weights, lattice]):
        if family == "inner":
            u = w * c
            if np.any(u > lam):
                continue
            alpha = 1.0 - u / lam
            split = DfPowerSplit(tuple(alpha), tuple(beta_star(config, alpha)))
            kind = classify_inner_rule(config, split).kind
            samples.append((split, kind))
        else:
            # sqrt(lam_k gamma_k) = w_k * root
            gamma = (w * root) ** 2 / lam
            if np.any(gamma > 1.0) or gamma.sum() > 1.0:
                continue
            vec = CorrelationVector(tuple(gamma))
            kind = classify_outer_rule(config, vec).kind
            samples.append((vec, kind))
        any_active = any_active or kind == ACTIVE
        if any_active and len(samples) >= 64:
            break
    verdict = ACTIVE_CLASS if any_active else INACTIVE_CLASS
    return RuleSetScan(family, 0.0, tuple(samples), None, None, verdict)


def _simplex_lattice(K, m):
    """Barycentric lattice of weight vectors with denominators m."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + [remaining])
            return
        for i in range(remaining + 1):
            rec(prefix + [i], remaining - i, slots - 1)

    rec([], m, K)
    return np.asarray(out, dtype=np.float64) / m


def sum_capacity(config, resolution=1e-3):
    """Sum-capacity value with its achievability status.

    Bottleneck regime and the active class are met exactly by
    decode-and-forward; an inactive-class verdict leaves the equalizer value
    as an upper bound only.
    """
    solution = solve_equalizer(config)
    if solution.regime == BOTTLENECK:
        return {"value": solution.sum_rate, "status": EXACT, "evidence": BOTTLENECK, "solution": solution}
    scan = scan_active_rules(config, solution, resolution=resolution)
    status = EXACT if scan.verdict == ACTIVE_CLASS else UPPER_BOUND_ONLY
    return {"value": solution.sum_rate, "status": status, "evidence": scan, "solution": solution}
