"""Command-line front end.

Subcommands:
  analytic   exact age metrics for one configuration
  simulate   one discrete-event replication with error bars
  sweep      CSV over a lambda grid (incl. the built-in fig3 preset)
  verify     self-checks: closed forms, linear-solve oracle, short sim

Exit codes: 0 success, 1 verification failure, 2 usage/validation error.
Scenario files are flat JSON {"lambda": x, "mu": [..], "policy": ".."};
command-line flags override file values.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import closed_form, ctmc, nonpreemptive, preemptive
from .model import Policy, StatePair, TandemConfig, validate
from .simulate import simulate

FIG3_MUS = [
    [1.5, 1.5, 1.5],
    [1.5, 1.5, 1.5, 5.0],
    [1.5, 1.5, 1.5, 1.5, 10.0],
]

FIG3_HEADER_COMMENT = """\
# fig3 preset: mean service time and age metrics across an arrival-rate sweep.
# Rate ladders (one per N): the last server gets the fast rate, all earlier
# servers stay at 1.5 --
#   N=3: mu=[1.5,1.5,1.5]; N=4: mu=[1.5,1.5,1.5,5]; N=5: mu=[1.5,1.5,1.5,1.5,10]
# lambda: 25 log-spaced points in [0.1, 10]. Analytic columns only; the
# sim_* columns are left empty (enable them via a sweep spec file).
"""


def _parse_mu(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise ValueError(f"could not parse --mu {text!r} as comma-separated reals")


def _load_scenario(args) -> tuple[TandemConfig, Policy]:
    lam = None
    mu = None
    policy = None
    if args.scenario:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("scenario file must hold a JSON object")
        lam = raw.get("lambda", lam)
        mu = raw.get("mu", mu)
        policy = raw.get("policy", policy)
    if args.lam is not None:
        lam = args.lam
    if args.mu is not None:
        mu = _parse_mu(args.mu)
    if args.policy is not None:
        policy = args.policy
    if lam is None or mu is None:
        raise ValueError("need lambda and mu (via --scenario or --lambda/--mu)")
    if policy is None:
        raise ValueError("need a policy (via --scenario or --policy)")
    return validate(TandemConfig(lam, mu)), Policy.parse(str(policy))


def _emit(text: str, args) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _estimate_dict(est) -> dict:
    return {"mean": est.mean, "std_error": est.std_error, "n": est.n}


def _distribution_dict(dist) -> dict:
    return {"index_base": dist.index_base, "probs": list(dist.probs)}


def cmd_analytic(args) -> int:
    config, policy = _load_scenario(args)
    if policy is Policy.PREEMPTIVE:
        report = preemptive.age_report(config)
    else:
        report = nonpreemptive.age_report(config)
    payload = {
        "policy": policy.value,
        "lambda": config.lam,
        "mu": list(config.mu),
        "mean_paoi": report.mean_paoi,
        "mean_aoi": report.mean_aoi,
        "mean_service": report.mean_service,
        "y1": report.interdeparture_mean,
        "y2": report.interdeparture_second_moment,
        "z1": report.cross_moment,
        "delivery_distribution": _distribution_dict(report.delivery_distribution),
    }
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        keys = [k for k in payload if k != "delivery_distribution"]
        w.writerow(keys + ["delivery_index_base", "delivery_probs"])
        w.writerow(
            [payload["policy"]]
            + [repr(payload["lambda"])]
            + [";".join(repr(v) for v in payload["mu"])]
            + [("" if payload[k] is None else repr(payload[k])) for k in keys[3:]]
            + [
                str(report.delivery_distribution.index_base),
                ";".join(repr(p) for p in report.delivery_distribution.probs),
            ]
        )
        _emit(buf.getvalue(), args)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args)
    return 0


def cmd_simulate(args) -> int:
    config, policy = _load_scenario(args)
    report = simulate(
        config,
        policy,
        args.deliveries,
        args.seed,
        warmup=args.warmup,
        backend=args.backend,
    )
    payload = {
        "policy": policy.value,
        "lambda": config.lam,
        "mu": list(config.mu),
        "seed": report.seed,
        "deliveries": report.horizon,
        "warmup": report.warmup,
        "backend": report.backend,
        "paoi": _estimate_dict(report.paoi),
        "aoi_time_average": _estimate_dict(report.aoi_time_average),
        "mean_service": _estimate_dict(report.mean_service),
        "mean_interdeparture": _estimate_dict(report.mean_interdeparture),
        "cross_moment_yt": _estimate_dict(report.cross_moment_yt),
        "event_frequencies": _distribution_dict(report.event_frequencies),
        "counts": {
            "deliveries_total": report.deliveries,
            "drops_or_preemptions": report.drops_or_preemptions,
            "generated": report.generated,
            "in_flight": report.in_flight,
        },
    }
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["metric", "mean", "std_error", "n"])
        for key in (
            "paoi",
            "aoi_time_average",
            "mean_service",
            "mean_interdeparture",
            "cross_moment_yt",
        ):
            est = payload[key]
            w.writerow([key, repr(est["mean"]), repr(est["std_error"]), est["n"]])
        _emit(buf.getvalue(), args)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args)
    return 0


def _sweep_rows(lambdas, mus, policies, do_sim, deliveries, seed):
    """Yield sweep rows in deterministic order: lambda, then N, then policy."""
    order = {Policy.PREEMPTIVE: 0, Policy.NONPREEMPTIVE: 1}
    mus_sorted = sorted(mus, key=len)
    policies_sorted = sorted(policies, key=order.__getitem__)
    row_index = 0
    for lam in sorted(lambdas):
        for mu in mus_sorted:
            config = validate(TandemConfig(lam, mu))
            y1, _ = preemptive.interdeparture_moments(config)
            for policy in policies_sorted:
                if policy is Policy.PREEMPTIVE:
                    tbar = preemptive.mean_service(config)
                    aoi = preemptive.mean_aoi(config)
                else:
                    tbar = nonpreemptive.mean_service(config)
                    aoi = None
                row = {
                    "lambda": lam,
                    "N": config.n,
                    "policy": policy.value,
                    "mean_service": tbar,
                    "mean_paoi": y1 + tbar,
                    "mean_aoi": aoi,
                    "sim_mean_service": "",
                    "sim_se": "",
                }
                if do_sim:
                    rep = simulate(config, policy, deliveries, seed ^ row_index)
                    row["sim_mean_service"] = rep.mean_service.mean
                    row["sim_se"] = rep.mean_service.std_error
                row_index += 1
                yield row


def cmd_sweep(args) -> int:
    if bool(args.preset) == bool(args.spec):
        raise ValueError("pass exactly one of --preset or --spec")
    comment = ""
    if args.preset:
        if args.preset != "fig3":
            raise ValueError(f"unknown preset {args.preset!r}")
        lambdas = np.logspace(math.log10(0.1), math.log10(10.0), 25).tolist()
        mus = FIG3_MUS
        policies = [Policy.PREEMPTIVE, Policy.NONPREEMPTIVE]
        do_sim = False
        deliveries = 0
        comment = FIG3_HEADER_COMMENT
    else:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
        lambdas = [float(x) for x in spec["lambdas"]]
        mus = [[float(m) for m in row] for row in spec["mus"]]
        policies = [Policy.parse(p) for p in spec.get("policies", ["preemptive", "nonpreemptive"])]
        do_sim = bool(spec.get("simulate", False))
        deliveries = int(spec.get("deliveries", args.deliveries))
        if not lambdas or not mus:
            raise ValueError("sweep spec needs non-empty 'lambdas' and 'mus'")
    buf = io.StringIO()
    buf.write(comment)
    w = csv.writer(buf)
    header = [
        "lambda",
        "N",
        "policy",
        "mean_service",
        "mean_paoi",
        "mean_aoi",
        "sim_mean_service",
        "sim_se",
    ]
    w.writerow(header)
    for row in _sweep_rows(lambdas, mus, policies, do_sim, deliveries, args.seed):
        w.writerow(
            [
                repr(float(row["lambda"])),
                row["N"],
                row["policy"],
            ]
            + [
                "" if row[k] == "" or row[k] is None else repr(float(row[k]))
                for k in ("mean_service", "mean_paoi", "mean_aoi", "sim_mean_service", "sim_se")
            ]
        )
    _emit(buf.getvalue(), args)
    return 0


def _check_closed_form(perturb: float) -> tuple[bool, str]:
    grid = [0.25, 0.5, 1.0, 2.0, 4.0]
    worst = 0.0
    count = 0
    for lam in grid:
        for m1 in grid:
            for m2 in grid:
                config = TandemConfig(lam * perturb, [m1, m2])
                dev = abs(
                    preemptive.mean_paoi(config)
                    - closed_form.paoi_preemptive_n2(lam, m1, m2)
                )
                dev = max(
                    dev,
                    abs(
                        nonpreemptive.mean_paoi(config)
                        - closed_form.paoi_nonpreemptive_n2(lam, m1, m2)
                    ),
                )
                worst = max(worst, dev)
                count += 2
    return worst <= 1e-10, f"max deviation {worst:.2e} over {count} comparisons"


def _check_oracle() -> tuple[bool, str]:
    rng = np.random.default_rng(12345)
    worst = 0.0
    blocks = 0
    for n in range(1, 5):
        for _ in range(3):
            rates = rng.uniform(0.1, 10.0, size=n + 1)
            config = TandemConfig(rates[0], rates[1:])
            for policy in (Policy.PREEMPTIVE, Policy.NONPREEMPTIVE):
                states, probs, times = ctmc.all_pairs(config, policy)
                if policy is Policy.PREEMPTIVE:
                    for i, s in enumerate(states):
                        for j, d in enumerate(states):
                            rec = preemptive.reach_probability(config, s, d)
                            worst = max(worst, abs(rec - probs[i, j]))
                            if probs[i, j] > 1e-9:
                                rec_t = preemptive.reach_time(config, s, d)
                                worst = max(worst, abs(rec_t - times[i, j]))
                else:
                    dcol = states.index(ctmc.DELIVERED)
                    for i, s in enumerate(states):
                        if s is ctmc.DELIVERED:
                            continue
                        rec = nonpreemptive.success_probability(config, s)
                        worst = max(worst, abs(rec - probs[i, dcol]))
                        if probs[i, dcol] > 1e-9:
                            rec_t = nonpreemptive.reach_time(config, s)
                            worst = max(worst, abs(rec_t - times[i, dcol]))
                blocks += 1
    return worst <= 1e-9, f"max deviation {worst:.2e} over {blocks} config-policies"


def _check_simulation() -> tuple[bool, str]:
    config = TandemConfig(1.0, [2.0, 3.0])
    worst_z = 0.0
    checks = 0
    for policy in (Policy.PREEMPTIVE, Policy.NONPREEMPTIVE):
        rep = simulate(config, policy, 20_000, seed=20240811)
        if policy is Policy.PREEMPTIVE:
            targets = [
                (rep.paoi, preemptive.mean_paoi(config)),
                (rep.mean_service, preemptive.mean_service(config)),
                (rep.mean_interdeparture, preemptive.interdeparture_moments(config)[0]),
                (rep.aoi_time_average, preemptive.mean_aoi(config)),
            ]
        else:
            targets = [
                (rep.paoi, nonpreemptive.mean_paoi(config)),
                (rep.mean_service, nonpreemptive.mean_service(config)),
                (rep.mean_interdeparture, preemptive.interdeparture_moments(config)[0]),
            ]
        for est, exact in targets:
            worst_z = max(worst_z, abs(est.mean - exact) / est.std_error)
            checks += 1
    return worst_z <= 3.0, f"worst |z| {worst_z:.2f} over {checks} comparisons (3 SE rule)"


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    perturb = 1.0 + 1e-6 if args.inject_fault else 1.0
    checks = [("closed-form-n2", *_check_closed_form(perturb))]
    checks.append(("ctmc-oracle", *_check_oracle()))
    if not args.skip_sim:
        checks.append(("simulation", *_check_simulation()))
    lines = []
    ok = True
    for name, passed, detail in checks:
        ok = ok and passed
        lines.append(f"{name:<16} {'PASS' if passed else 'FAIL':<6} {detail}")
    lines.append(
        f"overall: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t0:.1f} s)"
    )
    _emit("\n".join(lines) + "\n", args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="arrival rate")
    shared.add_argument("--mu", default=None,
                        help="comma-separated service rates, e.g. 2,3")
    shared.add_argument("--policy", default=None,
                        help="preemptive or nonpreemptive")
    shared.add_argument("--scenario", default=None,
                        help="JSON file {lambda, mu, policy}; flags override")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--deliveries", type=int, default=100_000,
                        help="post-warm-up deliveries to record")
    shared.add_argument("--output", default=None,
                        help="write to this path instead of stdout")
    shared.add_argument("--format", choices=["json", "csv"], default="json")

    ap = argparse.ArgumentParser(
        prog="tandem-aoi",
        description="Age metrics for a source feeding a line of bufferless servers.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", parents=[shared],
                       help="exact metrics from the recursions")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", parents=[shared],
                       help="discrete-event replication with error bars")
    p.add_argument("--warmup", type=int, default=None,
                   help="discarded deliveries (default max(1000, 1%%))")
    p.add_argument("--backend", default=None, choices=["python", "compiled"],
                   help="kernel override (default: compiled when built)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", parents=[shared],
                       help="CSV over a lambda grid")
    p.add_argument("--preset", default=None, help="named preset: fig3")
    p.add_argument("--spec", default=None,
                   help="JSON sweep spec {lambdas, mus, policies, simulate, deliveries}")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[shared],
                       help="run built-in self-checks")
    p.add_argument("--skip-sim", action="store_true",
                   help="closed-form and oracle checks only")
    p.add_argument("--inject-fault", action="store_true",
                   help="negative control: perturb a rate and expect FAIL")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, IndexError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
