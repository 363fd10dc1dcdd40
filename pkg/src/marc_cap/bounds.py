"""The four rate-bound families of the degraded Gaussian MARC.

Cutset (outer) bounds at the relay and destination are parameterized by a
source-relay correlation vector gamma; decode-and-forward (inner) bounds are
parameterized by a power split (alpha, beta). Every bound is a per-subset
rate ceiling; evaluating one family over all subsets yields a SubsetFunction
for the polymatroid engine.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import awgn_capacity
from .polymatroid import SubsetFunction

# Slack for membership tests of the parameter domains; the branch switch in
# the relay cutset bound is exact at this same tolerance (the branch-2 limit
# is not branch 1, so a fuzzy switch would be wrong on both sides).
DOMAIN_TOL = 1e-12


class DomainError(ValueError):
    """Parameters lie outside their feasible set."""


@dataclass(frozen=True)
class CorrelationVector:
    """Source-relay correlations gamma with E[X_k X_r] = sqrt(gamma_k P_k P_r).

    Feasible set: gamma_k in [0,1] for all k and sum(gamma) <= 1.
    """

    gamma: tuple

    def __post_init__(self):
        g = tuple(float(x) for x in self.gamma)
        for k, x in enumerate(g):
            if not (-DOMAIN_TOL <= x <= 1.0 + DOMAIN_TOL):
                raise DomainError(f"gamma[{k + 1}]={x!r} outside [0, 1]")
        if sum(g) > 1.0 + DOMAIN_TOL:
            raise DomainError(f"sum(gamma)={sum(g)!r} exceeds 1")
        object.__setattr__(self, "gamma", g)

    def vector(self):
        return np.clip(np.asarray(self.gamma, dtype=np.float64), 0.0, 1.0)


@dataclass(frozen=True)
class DfPowerSplit:
    """Decode-and-forward power fractions.

    alpha_k is the fraction of source k's power spent on fresh information
    (the rest cooperates with the relay); beta_k is the relay power fraction
    assisting source k. Feasible set: alpha in [0,1]^K, beta >= 0,
    sum(beta) <= 1.
    """

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        b = tuple(float(x) for x in self.beta)
        if len(a) != len(b):
            raise DomainError(f"alpha has {len(a)} entries, beta has {len(b)}")
        for k, x in enumerate(a):
            if not (-DOMAIN_TOL <= x <= 1.0 + DOMAIN_TOL):
                raise DomainError(f"alpha[{k + 1}]={x!r} outside [0, 1]")
        for k, x in enumerate(b):
            if x < -DOMAIN_TOL:
                raise DomainError(f"beta[{k + 1}]={x!r} negative")
        if sum(b) > 1.0 + DOMAIN_TOL:
            raise DomainError(f"sum(beta)={sum(b)!r} exceeds 1")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    def alpha_vector(self):
        return np.clip(np.asarray(self.alpha, dtype=np.float64), 0.0, 1.0)

    def beta_vector(self):
        return np.maximum(np.asarray(self.beta, dtype=np.float64), 0.0)


def full_mask(K):
    return (1 << K) - 1


def subset_indices(mask):
    """0-based source indices contained in a subset bitmask."""
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def subset_label(mask):
    """Human-readable 1-based set label, e.g. '{1,3}'."""
    return "{" + ",".join(str(k + 1) for k in subset_indices(mask)) + "}"


def as_correlation(gamma, K):
    if isinstance(gamma, CorrelationVector):
        g = gamma
    else:
        g = CorrelationVector(tuple(gamma))
    if len(g.gamma) != K:
        raise DomainError(f"gamma has {len(g.gamma)} entries, expected {K}")
    return g


def as_split(split, K):
    if not isinstance(split, DfPowerSplit):
        raise DomainError("expected a DfPowerSplit")
    if len(split.alpha) != K:
        raise DomainError(f"split has {len(split.alpha)} entries, expected {K}")
    return split


def outer_bound_relay(config, gamma, S):
    """Cutset rate ceiling at the relay for the sources in subset S.

    Correlating a source with the relay costs relay-side rate: the SNR is the
    subset power minus a penalty that grows with the subset's correlation
    mass and with the correlation already committed by the complement. When
    the complement's correlations sum to 1 exactly, the relay transmission is
    a deterministic function of the complement and the penalty vanishes.
    """
    g = as_correlation(gamma, config.K).vector()
    if S == 0:
        return 0.0
    P = config.powers()
    idx = subset_indices(S)
    comp = [k for k in range(config.K) if k not in idx]
    comp_mass = float(g[comp].sum()) if comp else 0.0
    subset_power = float(P[idx].sum())
    if abs(comp_mass - 1.0) <= DOMAIN_TOL:
        return awgn_capacity(subset_power / config.N_r)
    ubar = 1.0 - comp_mass
    coherent = float(np.sqrt(g[idx] * P[idx]).sum())
    snr = (subset_power - coherent * coherent / ubar) / config.N_r
    return awgn_capacity(snr)


def outer_bound_dest(config, gamma, S):
    """Cutset rate ceiling at the destination for subset S: subset power plus
    the relay power left after the complement's share plus the coherent
    combining gain of the subset's correlations."""
    g = as_correlation(gamma, config.K).vector()
    if S == 0:
        return 0.0
    P = config.powers()
    idx = subset_indices(S)
    comp = [k for k in range(config.K) if k not in idx]
    comp_mass = float(g[comp].sum()) if comp else 0.0
    ubar = 1.0 - comp_mass
    coherent = 2.0 * float(np.sqrt(g[idx] * P[idx] * config.P_r).sum())
    snr = (float(P[idx].sum()) + ubar * config.P_r + coherent) / config.N_d
    return awgn_capacity(snr)


def df_bound_relay(config, split, S):
    """Decode-and-forward rate ceiling at the relay: only the fresh-information
    fraction alpha_k of each source's power counts."""
    sp = as_split(split, config.K)
    if S == 0:
        return 0.0
    P = config.powers()
    a = sp.alpha_vector()
    idx = subset_indices(S)
    return awgn_capacity(float((a[idx] * P[idx]).sum()) / config.N_r)


def df_bound_dest(config, split, S):
    """Decode-and-forward rate ceiling at the destination: subset power, the
    relay power not pledged to the complement, and the coherent gain from the
    cooperative power fractions."""
    sp = as_split(split, config.K)
    if S == 0:
        return 0.0
    P = config.powers()
    a = sp.alpha_vector()
    b = sp.beta_vector()
    idx = subset_indices(S)
    comp = [k for k in range(config.K) if k not in idx]
    comp_beta = float(b[comp].sum()) if comp else 0.0
    coherent = 2.0 * float(np.sqrt((1.0 - a[idx]) * b[idx] * P[idx] * config.P_r).sum())
    snr = (float(P[idx].sum()) + (1.0 - comp_beta) * config.P_r + coherent) / config.N_d
    return awgn_capacity(snr)


def df_to_correlation(split):
    """Correlation vector induced by a power split: gamma_k = (1-alpha_k)*beta_k."""
    a = split.alpha_vector()
    b = split.beta_vector()
    return CorrelationVector(tuple((1.0 - a) * b))


def beta_star(config, alpha):
    """Relay split maximizing the destination bound for a fixed alpha.

    Each source's share is proportional to the power it commits to
    cooperation; all-ones alpha means no cooperation and a zero split.
    """
    a = np.clip(np.asarray(alpha, dtype=np.float64), 0.0, 1.0)
    if a.shape != (config.K,):
        raise DomainError(f"alpha has shape {a.shape}, expected ({config.K},)")
    P = config.powers()
    weights = (1.0 - a) * P
    total = float(weights.sum())
    if total < 1e-300:
        return np.zeros(config.K)
    return weights / total


def gamma_star_dest(config, S, c):
    """Correlations over subset S with total mass c that maximize the
    destination cutset bound for S: mass proportional to source power."""
    if not (0.0 <= c <= 1.0):
        raise DomainError(f"c={c!r} outside [0, 1]")
    P = config.powers()
    idx = subset_indices(S)
    out = np.zeros(config.K)
    if not idx:
        return out
    out[idx] = c * P[idx] / float(P[idx].sum())
    return out


def relay_cutset_function(config, gamma):
    """Relay cutset bounds over all subsets as a SubsetFunction."""
    vals = [outer_bound_relay(config, gamma, S) for S in range(1 << config.K)]
    return SubsetFunction(config.K, np.asarray(vals))


def dest_cutset_function(config, gamma):
    """Destination cutset bounds over all subsets as a SubsetFunction."""
    vals = [outer_bound_dest(config, gamma, S) for S in range(1 << config.K)]
    return SubsetFunction(config.K, np.asarray(vals))


def relay_df_function(config, split):
    """Relay decode-and-forward bounds over all subsets as a SubsetFunction."""
    vals = [df_bound_relay(config, split, S) for S in range(1 << config.K)]
    return SubsetFunction(config.K, np.asarray(vals))


def dest_df_function(config, split):
    """Destination decode-and-forward bounds over all subsets as a SubsetFunction."""
    vals = [df_bound_dest(config, split, S) for S in range(1 << config.K)]
    return SubsetFunction(config.K, np.asarray(vals))


def relay_sum_snr(config, x):
    """SNR of the K-user relay cutset bound as a function of the correlation
    statistic x = sum_k sqrt(gamma_k * lambda_k)."""
    P = config.powers()
    return (float(P.sum()) - x * x * config.P_max) / config.N_r


def dest_sum_snr(config, x):
    """SNR of the K-user destination cutset bound as a function of the same
    correlation statistic x."""
    P = config.powers()
    return (float(P.sum()) + config.P_r + 2.0 * x * math.sqrt(config.P_max * config.P_r)) / config.N_d
