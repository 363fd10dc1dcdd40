"""Command-line front end.

Five subcommands: sum-capacity report, two-user region CSV export, a
single-parameter intersection classifier, the built-in worked examples with
reference checks, and the verification suites. Output is deterministic for
fixed inputs and every emitted file starts with a manifest digest comment.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    CorrelationVector,
    DfPowerSplit,
    DomainError,
    beta_star,
    dest_cutset_function,
    dest_df_function,
    df_bound_dest,
    df_bound_relay,
    full_mask,
    outer_bound_dest,
    relay_cutset_function,
    relay_df_function,
    relay_sum_snr,
    subset_label,
)
from .channel import ChannelConfig, ValidationError, awgn_capacity
from .polymatroid import INACTIVE, intersection_max_sum
from .region import build_df_region, build_outer_region
from .sumcap import (
    ACTIVE_CLASS,
    BOTTLENECK,
    EQUALIZED,
    classify_inner_rule,
    inner_alpha2_of_alpha1,
    solve_equalizer,
    sum_capacity,
)
from .verify import (
    chord_check,
    dominance_check,
    gamma_sampler,
    grid_maxmin,
    mc_relay_conditional_variance,
    split_sampler,
)

MC_WARN_SAMPLES = 100000

# Built-in two-user configs, given as relay/destination SNRs with N_r = 1.
EXAMPLE_CONFIGS = {
    1: ChannelConfig(2, (6.0, 4.0), 4.0, 1.0, 1.0),
    2: ChannelConfig(2, (6.0, 0.4), 4.0, 1.0, 1.0),
}


class InputError(Exception):
    """Bad config file or flag values; exit code 2."""


class UnsupportedError(Exception):
    """Valid input outside the implemented dimensionality; exit code 3."""


POWER_FIELDS = {"K", "P", "P_r", "N_r", "N_delta"}
SNR_FIELDS = {"snr_relay", "snr_dest", "snr_relay_dest"}


def load_config(path):
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"config parse error in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    keys = set(data)
    if keys & POWER_FIELDS and keys & SNR_FIELDS:
        raise InputError("config mixes power and SNR fields; use exactly one form")
    if keys & SNR_FIELDS:
        if keys - SNR_FIELDS:
            raise InputError(f"unknown config field(s): {sorted(keys - SNR_FIELDS)}")
        if SNR_FIELDS - keys:
            raise InputError(f"missing config field(s): {sorted(SNR_FIELDS - keys)}")
        return _config_from_snr(data)
    required = POWER_FIELDS - {"K"}
    if keys - POWER_FIELDS:
        raise InputError(f"unknown config field(s): {sorted(keys - POWER_FIELDS)}")
    if required - keys:
        raise InputError(f"missing config field(s): {sorted(required - keys)}")
    try:
        P = tuple(float(x) for x in data["P"])
        K = int(data.get("K", len(P)))
        return ChannelConfig(K, P, float(data["P_r"]), float(data["N_r"]), float(data["N_delta"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise InputError(f"config field error: {exc}") from exc


def _config_from_snr(data):
    """SNR-form config, normalized to N_r = 1 (echoed in the config line)."""
    try:
        snr_r = [float(x) for x in data["snr_relay"]]
        snr_d = [float(x) for x in data["snr_dest"]]
        snr_rd = float(data["snr_relay_dest"])
    except (TypeError, ValueError) as exc:
        raise InputError(f"config field error: {exc}") from exc
    if len(snr_r) != len(snr_d):
        raise InputError(f"snr_relay has {len(snr_r)} entries, snr_dest has {len(snr_d)}")
    if not snr_r:
        raise InputError("snr_relay is empty")
    if min(snr_r + snr_d) <= 0 or snr_rd <= 0:
        raise InputError("SNR values must be positive")
    n_d = snr_r[0] / snr_d[0]
    for k in range(1, len(snr_r)):
        other = snr_r[k] / snr_d[k]
        if abs(other - n_d) > 1e-9 * max(1.0, n_d):
            raise InputError(f"inconsistent N_d: source 1 implies {n_d!r}, source {k + 1} implies {other!r}")
    if n_d < 1.0 - 1e-12:
        raise InputError(f"snr_dest exceeds snr_relay (N_d={n_d!r} < N_r=1); channel is not degraded")
    return ChannelConfig(len(snr_r), tuple(snr_r), snr_rd * n_d, 1.0, max(0.0, n_d - 1.0))


def _manifest_digest(command, config_path, config, params):
    doc = {
        "command": command,
        "config_source": None if config_path is None else str(config_path),
        "config": None
        if config is None
        else {"K": config.K, "P": list(config.P), "P_r": config.P_r, "N_r": config.N_r, "N_delta": config.N_delta},
        "params": params,
        "version": __version__,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _config_line(config):
    powers = ",".join(f"{p:.6f}" for p in config.P)
    return (
        f"config K={config.K} P={powers} P_r={config.P_r:.6f} "
        f"N_r={config.N_r:.6f} N_delta={config.N_delta:.6f}"
    )


def _print_solution(result):
    sol = result["solution"]
    if sol.regime == BOTTLENECK:
        print(f"regime=Bottleneck R={sol.sum_rate:.6f} status={result['status']}")
        return
    print(
        f"regime=Equalized root={sol.root:.6f} c={sol.constraint_value:.6f} "
        f"R={sol.sum_rate:.6f} status={result['status']}"
    )
    scan = result["evidence"]
    print(f"scan family={scan.family} resolution={scan.resolution:.6f} verdict={scan.verdict}")
    if scan.active_intervals:
        for name in sorted(scan.active_intervals):
            runs = scan.active_intervals[name]
            if runs:
                spans = ";".join(f"[{a:.6f},{b:.6f}]" for a, b in runs)
                print(f"active {name}={spans}")


def cmd_sumcap(args):
    config = load_config(args.config)
    if args.resolution <= 0:
        raise InputError(f"resolution must be positive, got {args.resolution!r}")
    digest = _manifest_digest("sumcap", args.config, config, {"resolution": args.resolution})
    print(f"# manifest {digest}")
    print(_config_line(config))
    _print_solution(sum_capacity(config, resolution=args.resolution))
    return 0


def cmd_region(args):
    config = load_config(args.config)
    if not 0.0 < args.step <= 1.0:
        raise InputError(f"step must be in (0, 1], got {args.step!r}")
    if config.K != 2:
        raise UnsupportedError(f"region export requires K=2, got K={config.K}")
    params = {"bound": args.bound, "step": args.step, "out": str(args.out)}
    digest = _manifest_digest("region", args.config, config, params)
    print(f"# manifest {digest}")
    print(_config_line(config))
    names = ("inner", "outer") if args.bound == "both" else (args.bound,)
    out = Path(args.out)
    for name in names:
        build = build_df_region if name == "inner" else build_outer_region
        poly = build(config, args.step)
        path = out if len(names) == 1 else out.with_suffix(f".{name}.csv")
        lines = [f"# manifest {digest}", "R1,R2"]
        lines.extend(f"{v[0]:.17g},{v[1]:.17g}" for v in poly.vertices)
        path.write_text("\n".join(lines) + "\n")
        print(f"wrote {path} bound={name} vertices={len(poly.vertices)}")
    return 0


def _parse_floats(text, flag):
    try:
        return [float(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise InputError(f"{flag} expects comma-separated numbers: {exc}") from exc


def _solve_last_alpha(config, values):
    solution = solve_equalizer(config)
    if solution.regime != EQUALIZED:
        raise InputError("cannot solve the last alpha: the Bottleneck regime has no equalizing constraint")
    lam = config.lam
    residual = solution.constraint_value - sum(l * (1.0 - a) for l, a in zip(lam, values))
    last = 1.0 - residual / lam[-1]
    if not -1e-9 <= last <= 1.0 + 1e-9:
        raise InputError(f"solved alpha_{config.K}={last!r} lies outside [0, 1]")
    return values + [min(max(last, 0.0), 1.0)]


def _solve_last_gamma(config, values):
    solution = solve_equalizer(config)
    if solution.regime != EQUALIZED:
        raise InputError("cannot solve the last gamma: the Bottleneck regime has no equalizing constraint")
    lam = config.lam
    rem = solution.root - sum((l * g) ** 0.5 for l, g in zip(lam, values))
    if rem < -1e-9:
        raise InputError(f"gamma prefix already exceeds the equalizing root {solution.root!r}")
    return values + [max(rem, 0.0) ** 2 / lam[-1]]


def cmd_classify(args):
    config = load_config(args.config)
    if (args.alpha is None) == (args.gamma is None):
        raise InputError("exactly one of --alpha or --gamma is required")
    if args.gamma is not None and args.beta is not None:
        raise InputError("--beta applies to --alpha only")
    K = config.K
    if args.alpha is not None:
        values = _parse_floats(args.alpha, "--alpha")
        if len(values) == K - 1:
            values = _solve_last_alpha(config, values)
        elif len(values) != K:
            raise InputError(f"--alpha expects {K} values (or {K - 1} with the last solved), got {len(values)}")
        beta = _parse_floats(args.beta, "--beta") if args.beta else list(beta_star(config, values))
        if len(beta) != K:
            raise InputError(f"--beta expects {K} values, got {len(beta)}")
        split = DfPowerSplit(tuple(values), tuple(beta))
        f1 = dest_df_function(config, split)
        f2 = relay_df_function(config, split)
        params = {"alpha": list(split.alpha), "beta": list(split.beta)}
        param_line = (
            "params alpha=" + ",".join(f"{a:.6f}" for a in split.alpha)
            + " beta=" + ",".join(f"{b:.6f}" for b in split.beta)
        )
    else:
        values = _parse_floats(args.gamma, "--gamma")
        if len(values) == K - 1:
            values = _solve_last_gamma(config, values)
        elif len(values) != K:
            raise InputError(f"--gamma expects {K} values (or {K - 1} with the last solved), got {len(values)}")
        vec = CorrelationVector(tuple(values))
        f1 = dest_cutset_function(config, vec)
        f2 = relay_cutset_function(config, vec)
        params = {"gamma": list(vec.gamma)}
        param_line = "params gamma=" + ",".join(f"{g:.6f}" for g in vec.gamma)
    digest = _manifest_digest("classify", args.config, config, params)
    print(f"# manifest {digest}")
    print(_config_line(config))
    print(param_line)
    for mask in range(1, 1 << K):
        print(f"subset {subset_label(mask)}: f1={f1(mask):.6f} f2={f2(mask):.6f}")
    outcome = intersection_max_sum(f1, f2)
    line = (
        f"max_sum={outcome.max_sum_rate:.6f} kind={outcome.kind} "
        f"argmin={subset_label(outcome.argmin_subset)}"
    )
    if K == 2:
        line += f" case={outcome.two_user_case}"
    print(line)
    return 0


def _check(label, value, reference, tol):
    ok = abs(value - reference) <= tol
    word = "PASS" if ok else "FAIL"
    print(f"  check {label}={value:.6f} reference={reference:.6f} tol={tol} -> {word}")
    return ok


def cmd_examples(args):
    digest = _manifest_digest("examples", None, None, {"resolution": 1e-3})
    print(f"# manifest {digest}")
    ok = True

    config = EXAMPLE_CONFIGS[1]
    print("Example 1:")
    print(_config_line(config))
    result = sum_capacity(config, resolution=1e-3)
    _print_solution(result)
    scan = result["evidence"]
    sol = result["solution"]
    ok &= _check("root", sol.root, 0.408, 1e-3)
    ok &= _check("alpha1_lo", scan.feasible_box["alpha1"][0], 0.833, 5e-3)
    ok &= _check("alpha2_lo", scan.feasible_box["alpha2"][0], 0.750, 5e-3)
    full_box = scan.active_intervals["alpha1"] == [scan.feasible_box["alpha1"]]
    print(f"  check full-rule-set-active={full_box} verdict={scan.verdict} -> "
          f"{'PASS' if full_box and scan.verdict == ACTIVE_CLASS else 'FAIL'}")
    ok &= full_box and scan.verdict == ACTIVE_CLASS

    config = EXAMPLE_CONFIGS[2]
    print("Example 2:")
    print(_config_line(config))
    result = sum_capacity(config, resolution=1e-3)
    _print_solution(result)
    scan = result["evidence"]
    sol = result["solution"]
    ok &= _check("root", sol.root, 0.197, 1e-3)
    ok &= _check("alpha1_lo", scan.feasible_box["alpha1"][0], 0.961, 5e-3)
    ok &= _check("alpha2_lo", scan.feasible_box["alpha2"][0], 0.416, 1e-2)
    runs1 = scan.active_intervals["alpha1"]
    runs2 = scan.active_intervals["alpha2"]
    if len(runs1) == 1 and len(runs2) == 1:
        ok &= _check("active_alpha1_lo", runs1[0][0], 0.961, 5e-3)
        ok &= _check("active_alpha1_hi", runs1[0][1], 0.979, 5e-3)
        ok &= _check("active_alpha2_lo", runs2[0][0], 0.731, 5e-3)
        ok &= _check("active_alpha2_hi", runs2[0][1], 1.000, 5e-3)
    else:
        print(f"  check active-runs count={len(runs1)} -> FAIL")
        ok = False
    # Equalizing rules beyond the active sub-interval must classify as the
    # two-user inactive case 2.
    for a1 in (0.985, 0.99, 1.0):
        a2 = inner_alpha2_of_alpha1(config, sol.constraint_value, a1)
        split = DfPowerSplit((a1, a2), tuple(beta_star(config, (a1, a2))))
        outcome = classify_inner_rule(config, split)
        good = outcome.kind == INACTIVE and outcome.two_user_case == "2"
        print(f"  check off-interval alpha1={a1:.6f} kind={outcome.kind} "
              f"case={outcome.two_user_case} -> {'PASS' if good else 'FAIL'}")
        ok &= good

    print(f"examples result={'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _verify_mc(config, n, seed, lines):
    if n < MC_WARN_SAMPLES:
        print(f"WARN mc sample count n={n} is low; z-scores will be noisy")
    K = config.K
    full = full_mask(K)
    draw = gamma_sampler(config, seed)
    g = draw()
    boundary = [0.0] * K
    boundary[0] = 1.0
    checks = [
        ([0.0] * K, full, 1),
        (list(g), 1, 1),
        (list(g), full, 2),
        (list(g), 1, 2),
        (boundary, full ^ 1, 1),
    ]
    for i, (gamma, S, mode) in enumerate(checks):
        rep = mc_relay_conditional_variance(config, gamma, S, mode=mode, n=n, seed=seed + i)
        word = "PASS" if rep.passed else "FAIL"
        tail = " degenerate" if rep.degenerate else ""
        print(
            f"{word} mc mode={rep.mode} S={subset_label(rep.subset)} "
            f"target={rep.target:.6f} estimate={rep.estimate:.6f} z={rep.z_score:+.6f}{tail}"
        )
        lines.append(rep.passed)


def _verify_chords(config, seed, lines, with_negative_control):
    K = config.K
    full = full_mask(K)
    # The relay cutset bound is concave in the scalar correlation statistic
    # x, not in gamma itself (the chord through (1,0,..) and (0,1,0,..)
    # breaks it), so its chord check runs on the x interval.
    x_max = float(np.sqrt(config.lam_vector().sum()))
    x_rng = np.random.default_rng(seed + 1)
    checks = [
        ("dest-cut-full", lambda v: outer_bound_dest(config, v, full), gamma_sampler(config, seed)),
        (
            "relay-cut-sumstat",
            lambda v: awgn_capacity(relay_sum_snr(config, float(v[0]))),
            lambda: np.array([x_rng.random() * x_max]),
        ),
        (
            "dest-df-full",
            lambda v: df_bound_dest(config, DfPowerSplit(tuple(v[:K]), tuple(v[K:])), full),
            split_sampler(config, seed + 2),
        ),
        (
            "relay-df-full",
            lambda v: df_bound_relay(config, DfPowerSplit(tuple(v[:K]), tuple(v[K:])), full),
            split_sampler(config, seed + 3),
        ),
    ]
    for name, fn, sampler in checks:
        rep = chord_check(fn, sampler, trials=1000, seed=seed)
        word = "PASS" if rep.passed else "FAIL"
        print(f"{word} chords {name} trials={rep.trials}")
        lines.append(rep.passed)
    if with_negative_control:
        control = chord_check(lambda v: float(v @ v), gamma_sampler(config, seed + 4), trials=1000, seed=seed)
        word = "PASS" if control.passed else "FAIL"
        print(f"{word} chords negative-control trials={control.trials} (a convex function must fail)")
        lines.append(control.passed)


def _verify_grid(config, seed, lines):
    if config.K > 3:
        print(f"WARN grid suite skipped: dense search supports K<=3, got K={config.K}")
        return
    solution = solve_equalizer(config)
    fine = grid_maxmin(config, step=0.01)
    diff = abs(fine.value - solution.sum_rate)
    ok = diff <= 1e-3
    print(f"{'PASS' if ok else 'FAIL'} grid value={fine.value:.6f} closed_form={solution.sum_rate:.6f} diff={diff:.6f}")
    lines.append(ok)
    coarse = grid_maxmin(config, step=0.02)
    mono = fine.value >= coarse.value - 1e-12
    print(f"{'PASS' if mono else 'FAIL'} grid refinement-monotone coarse={coarse.value:.6f} fine={fine.value:.6f}")
    lines.append(mono)


def cmd_verify(args):
    config = load_config(args.config)
    params = {"suite": args.suite, "seed": args.seed, "n": args.n, "negative_control": args.with_negative_control}
    digest = _manifest_digest("verify", args.config, config, params)
    print(f"# manifest {digest}")
    print(_config_line(config))
    suites = ("mc", "chords", "grid", "dominance") if args.suite == "all" else (args.suite,)
    lines = []
    if "mc" in suites:
        _verify_mc(config, args.n, args.seed, lines)
    if "chords" in suites:
        _verify_chords(config, args.seed, lines, args.with_negative_control)
    if "grid" in suites:
        _verify_grid(config, args.seed, lines)
    if "dominance" in suites:
        rep = dominance_check(config, trials=500, seed=args.seed)
        print(f"{'PASS' if rep.passed else 'FAIL'} dominance trials={rep.trials} max_gap={rep.max_gap:.2e}")
        lines.append(rep.passed)
    all_pass = all(lines)
    print(f"verify result={'PASS' if all_pass else 'FAIL'} checks={len(lines)}")
    return 0 if all_pass else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="marc-cap",
        description="Sum-capacity bounds and rate regions of the degraded Gaussian multiaccess relay channel.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sumcap", help="max-min sum-rate, regime, and rule-set scan")
    p.add_argument("config")
    p.add_argument("--resolution", type=float, default=1e-3, help="rule-set scan resolution (default 1e-3)")
    p.set_defaults(func=cmd_sumcap)

    p = sub.add_parser("region", help="export two-user rate-region polygons as CSV")
    p.add_argument("config")
    p.add_argument("--bound", choices=("inner", "outer", "both"), default="both")
    p.add_argument("--step", type=float, default=0.02, help="parameter lattice step (default 0.02)")
    p.add_argument("--out", default="region.csv", help="output CSV path (suffixed per bound for 'both')")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("classify", help="classify one parameter choice's polymatroid intersection")
    p.add_argument("config")
    p.add_argument("--alpha", help="comma-separated fresh-power fractions (K values, or K-1 to solve the last)")
    p.add_argument("--beta", help="comma-separated relay split (defaults to the proportional optimum)")
    p.add_argument("--gamma", help="comma-separated correlations (K values, or K-1 to solve the last)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("examples", help="run the built-in worked examples against their reference values")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("verify", help="run independent verification suites")
    p.add_argument("config")
    p.add_argument("--suite", choices=("mc", "chords", "grid", "dominance", "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=1000000, help="Monte-Carlo sample count (default 1e6)")
    p.add_argument("--with-negative-control", action="store_true",
                   help="also run the deliberately convex chord control (reports FAIL by design)")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
