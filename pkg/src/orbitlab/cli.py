"""
orbitlab command line.

    orbitlab orbits P Q [--oracle] [--find-trace T]
    orbitlab classify PAIR_FILE
    orbitlab cosets P Q --k K [--a A1,A2,...] [--trials N]
    orbitlab lfun P [--verify D] [--chars C1,C2,...]

Reports are JSON by default.  The exit status is 0 exactly when every
record passes its checks, 1 when some check fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

from . import __version__
from .exactalg import QQ, Cyclotomic, Matrix, PrimeField, parse_domain
from .gradedsl2 import (
    GradedDecomposition,
    enumerate_decompositions,
    is_regular,
    orbit_dim,
    parity_dims,
    trace_bruteforce,
    trace_formula,
)
from .lseries import (
    format_value,
    lhs_series,
    modular_exponent_PH,
    delta_half_exponent,
    partitions_upto,
    parse_characters,
    pole_order_at_one,
    rhs_product,
    whittaker_value,
)
from .orbits import (
    NilpotentPair,
    NotNilpotentError,
    classify,
    is_transpose_stable,
    rank_invariant,
    transpose_move,
    transpose_orbit,
)
from .symspace import (
    CosetInvariant,
    coset_invariants,
    is_closed,
    normal_dim_formula,
    normal_space_dim,
    random_h,
    rep_nu_block,
    tau,
)

DEFAULT_LIMITS = {"pq": 14, "d": 12}


class UsageError(Exception):
    pass


@dataclass
class Config:
    command: str
    field: str = "Q"
    truncate: int = 6
    seed: int = 0
    threads: int = 1
    format: str = "json"
    out: str | None = None
    unsafe_limits: bool = False

    def domain(self):
        try:
            return parse_domain(self.field)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def read_limits(env: dict | None = None) -> dict:
    """Caps, optionally overridden by ORBITLAB_LIMITS="pq=16,d=20"."""
    env = os.environ if env is None else env
    limits = dict(DEFAULT_LIMITS)
    text = env.get("ORBITLAB_LIMITS", "").strip()
    if not text:
        return limits
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in limits:
            raise UsageError(f"bad ORBITLAB_LIMITS entry {item!r}; keys are pq and d")
        try:
            limits[key] = int(value)
        except ValueError:
            raise UsageError(f"bad ORBITLAB_LIMITS value {value!r}") from None
    return limits


def _check_limit(cfg: Config, name: str, value: int):
    if cfg.unsafe_limits:
        return
    cap = read_limits()[name]
    if value > cap:
        label = "p + q" if name == "pq" else "D"
        raise UsageError(f"{label} = {value} exceeds the limit {cap}; use --unsafe-limits or ORBITLAB_LIMITS")


def _pmap(cfg: Config, fn: Callable, items: Iterable) -> list:
    items = list(items)
    if cfg.threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return list(pool.map(fn, items))


# -- commands -------------------------------------------------------------------


def cmd_orbits(p: int, q: int, cfg: Config, oracle: bool = False, find_trace: int | None = None) -> dict:
    if p < 0 or q < 0 or p + q < 1:
        raise UsageError(f"need p, q >= 0 and p + q >= 1, got ({p}, {q})")
    _check_limit(cfg, "pq", p + q)
    domain = cfg.domain()
    decomps = enumerate_decompositions(p, q)
    if find_trace is not None:
        decomps = [d for d in decomps if trace_formula(d) == find_trace]

    def record(d: GradedDecomposition) -> dict:
        trace = trace_formula(d)
        sigma = transpose_orbit(d)
        rec = {
            "decomposition": str(d),
            "parity_dims": [list(parity_dims(lam, om)) for lam, om in d],
            "trace": trace,
            "orbit_dim": orbit_dim(d),
            "is_regular": is_regular(d, p, q),
            "transpose_orbit": str(sigma),
            "transpose_stable": is_transpose_stable(d),
        }
        ok = True
        if oracle:
            brute = trace_bruteforce(d, domain)
            expected = trace % domain.ell if isinstance(domain, PrimeField) else trace
            rec["trace_bruteforce"] = brute
            rec["trace_match"] = brute == expected
            ok = rec["trace_match"]
        rec["pass"] = ok
        return rec

    records = _pmap(cfg, record, decomps)
    summary = {
        "count": len(records),
        "regular": sum(r["is_regular"] for r in records),
        "transpose_stable": sum(r["transpose_stable"] for r in records),
    }
    return _report("orbits", {"p": p, "q": q, "field": domain.tag, "oracle": oracle, "find_trace": find_trace},
                   records, summary)


def cmd_classify(pair_file: str, cfg: Config) -> dict:
    try:
        with open(pair_file) as fh:
            data = json.load(fh)
        pair = NilpotentPair.from_json(data)
    except OSError as exc:
        raise UsageError(f"cannot read {pair_file}: {exc.strerror}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed pair file {pair_file}: {exc}") from None
    _check_limit(cfg, "pq", pair.p + pair.q)
    try:
        d = classify(pair)
    except NotNilpotentError as exc:
        rec = {"nilpotent": False, "witness_power": exc.witness_power, "message": str(exc), "pass": False}
        return _report("classify", {"file": os.path.basename(pair_file), "p": pair.p, "q": pair.q}, [rec], {})
    inv = rank_invariant(pair)
    sigma = transpose_orbit(d)
    rec = {
        "nilpotent": True,
        "decomposition": str(d),
        "rank_x": inv.rank_x,
        "rank_y": inv.rank_y,
        "ranks": inv.to_json(),
        "transpose_orbit": str(sigma),
        "transpose_stable": sigma == d,
        "transpose_check": classify(transpose_move(pair)) == sigma,
    }
    rec["pass"] = rec["transpose_check"]
    args = {"file": os.path.basename(pair_file), "p": pair.p, "q": pair.q, "field": pair.domain.tag}
    return _report("classify", args, [rec], {})


def cmd_cosets(p: int, q: int, k: int, a_values: list[str], cfg: Config, trials: int = 0) -> dict:
    _check_limit(cfg, "pq", p + q)
    domain = cfg.domain()
    if isinstance(domain, Cyclotomic):
        raise UsageError("cosets supports --field Q or Fp:<l>")
    try:
        a = [domain(x) for x in a_values]
        g = rep_nu_block(p, q, k, a, domain)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    t = tau(g, p, q)
    closed = is_closed(g, p, q)
    inv = coset_invariants(g, p, q)
    expected = CosetInvariant(k, len(a), tuple(sorted(a, key=lambda v: getattr(v, "value", v))))
    ndim = normal_space_dim(g, p, q)
    formula = normal_dim_formula(p, q, k, a)
    rec = {
        "representative": g.to_json(),
        "tau": t.to_json(),
        "tau_charpoly": str(t.charpoly()),
        "closed": closed,
        "invariant": inv.to_json(domain),
        "invariant_match": inv == expected,
        "normal_dim": ndim,
        "normal_dim_formula": formula,
        "normal_dim_match": ndim == formula,
    }
    ok = closed and rec["invariant_match"] and rec["normal_dim_match"]
    if trials:
        if not isinstance(domain, type(QQ)):
            raise UsageError("--trials needs --field Q")
        rng = random.Random(cfg.seed)
        pairs = [(random_h(p, q, rng), random_h(p, q, rng)) for _ in range(trials)]
        hits = _pmap(cfg, lambda hh: coset_invariants(hh[0] @ g @ hh[1], p, q) == inv, pairs)
        rec["bi_invariance"] = {"trials": trials, "seed": cfg.seed, "all_equal": all(hits)}
        ok = ok and all(hits)
    rec["pass"] = ok
    args = {"p": p, "q": q, "k": k, "a": [domain.format(x) for x in a], "field": domain.tag}
    return _report("cosets", args, [rec], {})


POLE_NOTE = (
    "order >= 1 means L(s, Lambda^2) L(s) has a pole at s = 0 that survives the (1 - q^(-ns)) zero; "
    "a trivial product of the parameters alone does not force this"
)


def cmd_lfun(p: int, cfg: Config, verify: int | None = None, chars: str | None = None) -> dict:
    if p < 0:
        raise UsageError("p must be >= 0")
    n = 2 * p + 1
    _check_limit(cfg, "pq", n)
    records = []
    args = {"p": p, "n": n}
    if verify is None and chars is None:
        verify = cfg.truncate
    if verify is not None:
        _check_limit(cfg, "d", verify)
        lhs, rhs = lhs_series(None, n, verify), rhs_product(None, n, verify)
        rows = _pmap(cfg, lambda k: {"deg": k, "lhs": str(lhs[k]), "rhs": str(rhs[k]), "match": lhs[k] == rhs[k]},
                     range(verify + 1))
        records.append({"kind": "identity", "truncation": verify, "rows": rows,
                        "identity_holds": all(r["match"] for r in rows), "pass": all(r["match"] for r in rows)})
        args["verify"] = verify
    if chars is not None:
        D = cfg.truncate
        _check_limit(cfg, "d", D)
        try:
            xs, domain = parse_characters(chars)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if len(xs) != n:
            raise UsageError(f"need {n} character values for p = {p}, got {len(xs)}")
        lams = list(partitions_upto(D, n, n))

        def row(lam) -> dict:
            w = whittaker_value(lam, xs)
            r = {"lambda": list(lam), "coeff": format_value(w.coeff), "q_exp": w.q_power.exponent}
            if lam.parts[-1] == 0:
                r["delta_match"] = modular_exponent_PH(lam, p) == delta_half_exponent(lam, n)
            return r

        table = _pmap(cfg, row, lams)
        delta_ok = all(r.get("delta_match", True) for r in table)
        records.append({"kind": "whittaker", "truncation": D, "rows": table, "delta_identity": delta_ok,
                        "pass": delta_ok})
        try:
            pole = pole_order_at_one(xs, p)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        records.append({"kind": "pole", **pole.to_json(), "pole_at_zero": pole.order >= 1, "note": POLE_NOTE,
                        "pass": True})
        args["chars"] = [format_value(x) for x in xs]
        args["field"] = domain.tag
    return _report("lfun", args, records, {})


def _report(command: str, args: dict, records: list, summary: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "args": args,
        "summary": summary,
        "records": records,
        "pass": all(r["pass"] for r in records),
    }


# -- rendering --------------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = [f"{report['command']} " + " ".join(f"{k}={_flat(v)}" for k, v in report["args"].items())]
    for key, value in report["summary"].items():
        lines.append(f"  {key}: {value}")
    for i, rec in enumerate(report["records"]):
        lines.append(f"[{i}]")
        for key, value in rec.items():
            lines.append(f"  {key}: {_flat(value)}")
    lines.append("PASS" if report["pass"] else "FAIL")
    return "\n".join(lines) + "\n"


def _flat(value) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="Q", help="Q, Fp:<l> or Cyc:<m> (default Q)")
    common.add_argument("--truncate", type=int, default=6, metavar="D", help="series truncation degree (default 6)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--unsafe-limits", action="store_true", help="ignore the size caps")

    parser = argparse.ArgumentParser(prog="orbitlab", description="Nilpotent orbits, closed cosets and L-factors.")
    parser.add_argument("--version", action="version", version=f"orbitlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    o = sub.add_parser("orbits", parents=[common], help="enumerate nilpotent orbits on I_{p,q}")
    o.add_argument("p", type=int)
    o.add_argument("q", type=int)
    o.add_argument("--oracle", action="store_true", help="also compute traces by brute force")
    o.add_argument("--find-trace", type=int, metavar="T", help="only orbits whose trace is T")

    c = sub.add_parser("classify", parents=[common], help="classify a nilpotent pair from a JSON file")
    c.add_argument("pair_file")

    s = sub.add_parser("cosets", parents=[common], help="closed double coset representatives")
    s.add_argument("p", type=int)
    s.add_argument("q", type=int)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--a", default="", help="comma separated a-values of the quadratic blocks")
    s.add_argument("--trials", type=int, default=0, help="random bi-invariance trials (seeded)")

    lf = sub.add_parser("lfun", parents=[common], help="Whittaker values and the exterior square L-factor")
    lf.add_argument("p", type=int)
    lf.add_argument("--verify", type=int, metavar="D", help="check the series identity through degree D")
    lf.add_argument("--chars", help="Satake parameters: a/b or zeta:m:j, comma separated")
    return parser


def run(argv: list[str] | None = None) -> tuple[dict, Config]:
    ns = build_parser().parse_args(argv)
    cfg = Config(ns.command, ns.field, ns.truncate, ns.seed, ns.threads, ns.format, ns.out, ns.unsafe_limits)
    if cfg.threads < 1:
        raise UsageError("--threads must be >= 1")
    if cfg.truncate < 0:
        raise UsageError("--truncate must be >= 0")
    if ns.command == "orbits":
        report = cmd_orbits(ns.p, ns.q, cfg, ns.oracle, ns.find_trace)
    elif ns.command == "classify":
        report = cmd_classify(ns.pair_file, cfg)
    elif ns.command == "cosets":
        a_values = [x.strip() for x in ns.a.split(",") if x.strip()]
        report = cmd_cosets(ns.p, ns.q, ns.k, a_values, cfg, ns.trials)
    else:
        report = cmd_lfun(ns.p, cfg, ns.verify, ns.chars)
    return report, cfg


def main(argv: list[str] | None = None) -> int:
    try:
        report, cfg = run(argv)
    except UsageError as exc:
        print(f"orbitlab: error: {exc}", file=sys.stderr)
        return 2
    text = render(report, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
