"""Independent verification oracles: Monte-Carlo checks of the Gaussian
conditional-variance identities behind the relay cutset bound, a lattice
max-min search that cross-checks the closed-form equalizer, and randomized
chord/dominance probes backing the concavity and ordering claims."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bounds import (
    CorrelationVector,
    DfPowerSplit,
    beta_star,
    df_bound_dest,
    df_bound_relay,
    df_to_correlation,
    outer_bound_dest,
    outer_bound_relay,
    subset_indices,
)
from .channel import awgn_capacity, validate

# Conditional variances below this fraction of the power scale are treated
# as deterministic; the z-score is meaningless there.
DEGENERATE_TOL = 1e-9

EQUALITY_TOL = 1e-12
CHORD_TOL = 1e-9


@dataclass(frozen=True)
class McReport:
    mode: int
    subset: int
    n: int
    seed: int
    estimate: float
    target: float
    std_error: float
    z_score: float
    degenerate: bool

    @property
    def passed(self):
        if self.degenerate:
            return self.estimate <= DEGENERATE_TOL * max(1.0, self.target + 1.0)
        return abs(self.z_score) <= 4.0


@dataclass(frozen=True)
class ChordReport:
    passed: bool
    trials: int
    witness: dict | None = None


@dataclass(frozen=True)
class DominanceReport:
    passed: bool
    trials: int
    max_gap: float
    witness: dict | None = None


@dataclass(frozen=True)
class GridMaxMin:
    value: float
    argmax: CorrelationVector
    step: float


def _gaussian_inputs(config, gamma, n, rng):
    """Sample (X_1..X_K, X_r) with the channel's powers and the requested
    source-relay correlations sqrt(gamma_k P_k P_r)."""
    g = np.asarray(gamma, dtype=np.float64)
    P = config.powers()
    W = rng.standard_normal((n, config.K + 1))
    X = W[:, 1:] * np.sqrt(P)
    resid_mass = max(0.0, 1.0 - float(g.sum()))
    X_r = W[:, 1:] @ np.sqrt(g * config.P_r) + W[:, 0] * np.sqrt(resid_mass * config.P_r)
    return X, X_r


def _residual_variance(y, design):
    n = len(y)
    p = design.shape[1]
    if p:
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        y = y - design @ coef
    return float(y @ y) / (n - p), p


def mc_relay_conditional_variance(config, gamma, S, mode=1, n=1000000, seed=0):
    """Estimate a conditional variance by linear-MMSE regression residuals
    (exact for jointly Gaussian inputs) and compare to the closed form.

    mode 1: var(X_r | X_{S^c}) against the residual relay power.
    mode 2: var(sum_S X_k | X_{S^c}, X_r) against the relay-cut SNR
    numerator, matching its branch at complement mass 1.
    """
    config = validate(config)
    vec = gamma if isinstance(gamma, CorrelationVector) else CorrelationVector(tuple(gamma))
    if mode not in (1, 2):
        raise ValueError(f"mode must be 1 or 2, got {mode!r}")
    g = vec.vector()
    P = config.powers()
    in_S = subset_indices(S)
    comp = [k for k in range(config.K) if k not in in_S]
    comp_mass = float(g[comp].sum()) if comp else 0.0
    ubar = 1.0 - comp_mass

    if mode == 1:
        target = ubar * config.P_r
    elif abs(comp_mass - 1.0) <= EQUALITY_TOL:
        target = float(P[in_S].sum())
    else:
        s = float(np.sqrt(g[in_S] * P[in_S]).sum())
        target = float(P[in_S].sum()) - s * s / ubar

    rng = np.random.default_rng(seed)
    X, X_r = _gaussian_inputs(config, g, n, rng)
    if mode == 1:
        y = X_r
        design = X[:, comp]
    else:
        y = X[:, in_S].sum(axis=1)
        design = np.column_stack([X[:, comp], X_r])
    estimate, p = _residual_variance(y, design)

    scale = max(1.0, config.P_r, float(P.sum()))
    degenerate = target <= DEGENERATE_TOL * scale
    if degenerate:
        se = 0.0
        z = 0.0
    else:
        se = estimate * np.sqrt(2.0 / (n - p))
        z = (estimate - target) / se
    return McReport(mode, int(S), n, seed, estimate, target, se, float(z), degenerate)


def grid_maxmin(config, step=0.01, impl="auto"):
    """Dense lattice max of the equal-rate objective min(relay cut, dest
    cut) over the correlation simplex, then local refinement around the
    incumbent until the window is exhausted. Deterministic for fixed step."""
    config = validate(config)
    if config.K > 3:
        raise ValueError("dense grid search supports K <= 3")
    if step <= 0 or step > 1:
        raise ValueError(f"step must be in (0, 1], got {step!r}")
    n = max(1, round(1.0 / step))
    P = config.powers()
    snr, gamma = _kernels.lattice_maxmin(P, config.P_r, config.N_r, config.N_d, n, impl=impl)
    snr, gamma = _refine(config, snr, gamma, 1.0 / n)
    return GridMaxMin(awgn_capacity(max(snr, 0.0)), CorrelationVector(tuple(gamma)), step)


def _refine(config, best_snr, center, width):
    P = config.powers()
    K = config.K
    offsets = np.linspace(-1.0, 1.0, 11)
    while width > 1e-13:
        axes = [center[k] + width * offsets for k in range(K)]
        G = np.stack([ax.ravel() for ax in np.meshgrid(*axes, indexing="ij")], axis=1)
        keep = np.all(G >= 0.0, axis=1) & (G.sum(axis=1) <= 1.0) & np.all(G <= 1.0, axis=1)
        G = G[keep]
        if len(G):
            snrs = _kernels.min_snr_batch(P, config.P_r, config.N_r, config.N_d, G)
            i = int(np.argmax(snrs))
            if snrs[i] > best_snr:
                best_snr = float(snrs[i])
                center = G[i]
                continue
        width /= 10.0
    return best_snr, center


def gamma_sampler(config, seed=0):
    """Uniform-ish sampler over the correlation simplex (closure included)."""
    rng = np.random.default_rng(seed)
    K = config.K

    def draw():
        w = rng.dirichlet(np.ones(K + 1))
        return w[:K]

    return draw


def split_sampler(config, seed=0):
    """Sampler over the power-split domain: alpha in the unit cube, beta in
    the simplex (joint vector of length 2K)."""
    rng = np.random.default_rng(seed)
    K = config.K

    def draw():
        alpha = rng.random(K)
        beta = rng.dirichlet(np.ones(K + 1))[:K]
        return np.concatenate([alpha, beta])

    return draw


def chord_check(fn, sampler, trials=1000, seed=0, tol=CHORD_TOL):
    """Concavity probe: random chords must not rise above the function.

    `fn` maps a domain vector to a float; `sampler` yields domain vectors.
    The callable returned by gamma_sampler/split_sampler already carries its
    own rng, so `seed` here only drives the chord mixing weights.
    """
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        a = np.asarray(sampler(), dtype=np.float64)
        b = np.asarray(sampler(), dtype=np.float64)
        lam = rng.random()
        mid_value = fn(lam * a + (1.0 - lam) * b)
        chord_value = lam * fn(a) + (1.0 - lam) * fn(b)
        if mid_value < chord_value - tol:
            witness = {
                "a": a.tolist(),
                "b": b.tolist(),
                "lam": lam,
                "midpoint_value": mid_value,
                "chord_value": chord_value,
            }
            return ChordReport(False, trials, witness)
    return ChordReport(True, trials)


def dominance_check(config, trials=500, seed=0):
    """Random power splits: the cutset destination bound dominates the
    decode-and-forward one at the induced correlations for every subset, and
    the proportional relay split makes the full-set relay bounds coincide."""
    config = validate(config)
    rng = np.random.default_rng(seed)
    K = config.K
    full = (1 << K) - 1
    max_gap = 0.0
    for _ in range(trials):
        alpha = rng.random(K)
        beta = rng.dirichlet(np.ones(K + 1))[:K]
        split = DfPowerSplit(tuple(alpha), tuple(beta))
        gamma = df_to_correlation(split)
        for S in range(1, full + 1):
            gap = df_bound_dest(config, split, S) - outer_bound_dest(config, gamma, S)
            max_gap = max(max_gap, gap)
            if gap > EQUALITY_TOL:
                witness = {
                    "kind": "dest_dominance",
                    "alpha": alpha.tolist(),
                    "beta": beta.tolist(),
                    "subset": S,
                    "inner": df_bound_dest(config, split, S),
                    "outer": outer_bound_dest(config, gamma, S),
                }
                return DominanceReport(False, trials, max_gap, witness)
        star = DfPowerSplit(tuple(alpha), tuple(beta_star(config, alpha)))
        gamma_star = df_to_correlation(star)
        gap = abs(outer_bound_relay(config, gamma_star, full) - df_bound_relay(config, star, full))
        max_gap = max(max_gap, gap)
        if gap > EQUALITY_TOL:
            witness = {
                "kind": "relay_full_equality",
                "alpha": alpha.tolist(),
                "beta": list(star.beta),
                "subset": full,
                "inner": df_bound_relay(config, star, full),
                "outer": outer_bound_relay(config, gamma_star, full),
            }
            return DominanceReport(False, trials, max_gap, witness)
    return DominanceReport(True, trials, max_gap)
