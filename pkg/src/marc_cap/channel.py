"""Channel instance definition for K-user degraded Gaussian multiaccess relay
channels: source powers, relay power, the two noise variances, and the scalar
AWGN capacity function used by every bound."""

import math
from dataclasses import dataclass, field

import numpy as np

# Tiny negative SNR arguments are floating-point cancellation dust from the
# subtractive relay-bound formula; anything below this is a formula bug.
SNR_CLAMP = -1e-12


class ValidationError(ValueError):
    """A channel config field violates the model constraints."""


def awgn_capacity(snr):
    """Capacity of a scalar AWGN channel, 0.5*log2(1+snr) bits/channel use."""
    if snr < 0.0:
        if snr < SNR_CLAMP:
            raise ValueError(f"negative SNR argument {snr!r}")
        snr = 0.0
    return 0.5 * math.log2(1.0 + snr)


@dataclass(frozen=True)
class ChannelConfig:
    """A degraded Gaussian multiaccess relay channel.

    K sources with powers P transmit to a destination aided by one relay.
    The relay sees noise variance N_r; the destination sees the relay's
    observation further degraded by independent noise of variance N_delta,
    so its total noise variance is N_d = N_r + N_delta.
    """

    K: int
    P: tuple
    P_r: float
    N_r: float
    N_delta: float
    P_max: float = field(init=False)
    lam: tuple = field(init=False)

    def __post_init__(self):
        if not isinstance(self.K, int) or self.K < 1:
            raise ValidationError(f"K must be a positive integer, got {self.K!r}")
        P = tuple(float(p) for p in self.P)
        if len(P) != self.K:
            raise ValidationError(f"P has {len(P)} entries, expected K={self.K}")
        for k, p in enumerate(P):
            if not (p > 0.0 and math.isfinite(p)):
                raise ValidationError(f"P[{k + 1}] must be positive, got {p!r}")
        if not (self.P_r > 0.0 and math.isfinite(self.P_r)):
            raise ValidationError(f"P_r must be positive, got {self.P_r!r}")
        if not (self.N_r > 0.0 and math.isfinite(self.N_r)):
            raise ValidationError(f"N_r must be positive, got {self.N_r!r}")
        if not (self.N_delta >= 0.0 and math.isfinite(self.N_delta)):
            raise ValidationError(f"N_delta must be nonnegative, got {self.N_delta!r}")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "P_r", float(self.P_r))
        object.__setattr__(self, "N_r", float(self.N_r))
        object.__setattr__(self, "N_delta", float(self.N_delta))
        p_max = max(P)
        object.__setattr__(self, "P_max", p_max)
        object.__setattr__(self, "lam", tuple(p / p_max for p in P))

    @property
    def N_d(self):
        return self.N_r + self.N_delta

    def powers(self):
        """Source powers as a numpy vector."""
        return np.asarray(self.P, dtype=np.float64)

    def lam_vector(self):
        """Powers normalized by the largest one, as a numpy vector."""
        return np.asarray(self.lam, dtype=np.float64)


def validate(config):
    """Return the config if it satisfies all model constraints.

    Accepts either a ChannelConfig (re-checked by construction) or a mapping
    with fields K, P, P_r, N_r, N_delta.
    """
    if isinstance(config, ChannelConfig):
        return ChannelConfig(config.K, config.P, config.P_r, config.N_r, config.N_delta)
    return ChannelConfig(
        K=config["K"],
        P=tuple(config["P"]),
        P_r=config["P_r"],
        N_r=config["N_r"],
        N_delta=config["N_delta"],
    )


def symmetric(K, P, P_r, N_r, N_delta):
    """Config with all K source powers equal to P."""
    if not isinstance(K, int) or K < 1:
        raise ValidationError(f"K must be a positive integer, got {K!r}")
    return ChannelConfig(K=K, P=(float(P),) * K, P_r=P_r, N_r=N_r, N_delta=N_delta)
