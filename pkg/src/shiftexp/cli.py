"""Command-line front end: shiftexp {scan, cover, density, moments, galois, construct}.

Exit codes: 0 on success, 2 when an input violates a precondition, 1 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

from . import construct, covering, density, galois, moments, primeset


def _available_threads() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not on Linux
        return os.cpu_count() or 1


DEFAULTS = {
    "scan": {"mode": "all", "w": 0, "out": None},
    "cover": {"domain": "all", "json": None},
    "density": {"m": 1, "d": 1, "r": 0, "prime_bound": density.DEFAULT_PRIME_BOUND, "empirical_x": None},
    "moments": {"m": None, "d": 1, "r": None, "mprime": None, "y": None, "eps": 0.5, "k": None, "w": 5, "lambda": 1.5},
    "galois": {"r": 0},
    "construct": {"budget": 10**6},
    "threads": "available parallelism",
}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _int(text: str) -> int:
    # accepts 10**6 style shorthand such as 1e6 when it is an exact integer
    try:
        return int(text)
    except ValueError:
        f = float(text)
        if not f.is_integer():
            raise argparse.ArgumentTypeError(f"expected an integer, got {text}")
        return int(f)


def _posint(text: str) -> int:
    return _positive(str(_int(text)))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shiftexp",
        description="Prime divisors of a^n - b: prime scans, covering sieves, densities, moments.",
    )
    ap.add_argument("--threads", type=_positive, default=None,
                    help="worker processes for prime scans (default: available parallelism)")
    sub = ap.add_subparsers(dest="cmd", required=True, metavar="{scan,cover,density,moments,galois,construct}")
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("scan", help="emit the prime-record CSV for p <= xmax", formatter_class=fmt)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in primeset.Mode], default="all")
    p.add_argument("--w", type=_nonneg, default=0, help="W-trick cutoff (prime mode)")
    p.add_argument("--xmax", type=_posint, required=True)
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p = sub.add_parser("cover", help="covering sieve over the S-records with p <= cutoff", formatter_class=fmt)
    p.add_argument("--records", required=True, help="record CSV written by scan")
    p.add_argument("--xlimit", type=_posint, required=True)
    p.add_argument("--cutoff", type=_posint, required=True)
    p.add_argument("--domain", choices=[d.value for d in covering.Domain], default="all")
    p.add_argument("--json", default=None, help="output JSON path (default: stdout)")

    p = sub.add_parser("density", help="predicted density of S_{m,d,r}", formatter_class=fmt)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--m", type=_positive, default=1)
    p.add_argument("--d", type=_positive, default=1)
    p.add_argument("--r", type=_nonneg, default=0)
    p.add_argument("--prime-bound", type=_posint, default=density.DEFAULT_PRIME_BOUND,
                   help="truncation of the Euler product")
    p.add_argument("--empirical-x", type=_posint, default=None,
                   help="also count S_{m,d,r} among p <= this bound")

    p = sub.add_parser("moments", help="one moment statistic as a CSV row", formatter_class=fmt)
    p.add_argument("--stat", choices=["mu", "ratio", "sigma", "bt", "phitail"], required=True)
    p.add_argument("--records", default=None, help="record CSV (mu, ratio, sigma)")
    p.add_argument("--x", type=_posint, default=None, help="range bound (mu, ratio, sigma, phitail)")
    p.add_argument("--a", type=int, default=None, help="base (bt, phitail)")
    p.add_argument("--b", type=int, default=None, help="shift (bt, phitail)")
    p.add_argument("--m", type=_positive, default=None)
    p.add_argument("--d", type=_positive, default=1)
    p.add_argument("--r", type=_nonneg, default=None, help="sigma: single residue; omit to sum over r")
    p.add_argument("--mprime", type=_positive, default=None)
    p.add_argument("--y", type=_posint, default=None)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--k", type=_positive, default=None, help="phitail modulus (default 4|ab|h)")
    p.add_argument("--w", type=_nonneg, default=5)
    p.add_argument("--lambda", dest="lam", type=float, default=1.5)

    p = sub.add_parser("galois", help="conjugacy classes of the triple group", formatter_class=fmt)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--mprime", type=_positive, required=True)
    p.add_argument("--r", type=_nonneg, default=0)
    p.add_argument("--check", choices=["classes", "fixing", "disjoint"], required=True)

    p = sub.add_parser("construct", help="counterexample with fixed divisors on every class mod p",
                       formatter_class=fmt)
    p.add_argument("--p", type=_positive, required=True)
    p.add_argument("--budget", type=_posint, default=10**6)

    # hidden: pins the defaults for regression tests
    sub.add_parser("defaults")
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "defaults"]
    return ap


def _load_records(path: str | None) -> list[primeset.PrimeRecord]:
    if path is None:
        raise ValueError("--records is required for this statistic")
    with open(path, newline="") as fh:
        return primeset.read_records_csv(fh)


def _require(ns: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(ns, n) is None]
    if missing:
        raise ValueError(f"--stat {ns.stat} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _emit(text: str, path: str | None, out) -> None:
    if path is None:
        out.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _scan(ns, out) -> None:
    params = primeset.make_params(ns.a, ns.b, ns.mode, ns.w)
    recs = primeset.stream_records(params, ns.xmax, workers=ns.threads)
    if ns.out is None:
        primeset.write_records_csv(recs, out)
    else:
        with open(ns.out, "w", newline="") as fh:
            primeset.write_records_csv(recs, fh)


def _cover(ns, out) -> None:
    recs = [r for r in _load_records(ns.records) if r.in_S and r.p <= ns.cutoff]
    report = covering.cover_sieve(recs, ns.xlimit, ns.cutoff, ns.domain)
    _emit(report.to_json() + "\n", ns.json, out)


def _density(ns, out) -> None:
    params = primeset.make_params(ns.a, ns.b)
    est = density.global_density(ns.m, ns.d, ns.r, params, ns.prime_bound)
    if ns.empirical_x is not None:
        est = density.with_empirical(est, ns.m, ns.d, ns.r, params, ns.empirical_x)
    out.write(est.to_json() + "\n")


def _moments(ns, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    if ns.stat in ("mu", "ratio", "sigma"):
        _require(ns, "x")
        recs = _load_records(ns.records)
        if ns.stat == "mu":
            w.writerows([("statistic", "x", "value"), ("mu", ns.x, repr(moments.mu_sum(recs, ns.x)))])
        elif ns.stat == "ratio":
            sm = moments.second_moment(recs, ns.x)
            assert sm.ratio >= 1, f"second-moment ratio {sm.ratio} < 1"
            w.writerows([
                ("statistic", "x", "n_primes", "numerator", "denominator", "value"),
                ("ratio", ns.x, sm.n_primes, sm.numerator, sm.denominator, repr(float(sm.ratio))),
            ])
        else:
            _require(ns, "m")
            if ns.r is None:
                value = moments.sigma_md(recs, ns.m, ns.d, ns.x)
            else:
                value = moments.sigma_mdr(recs, ns.m, ns.d, ns.r, ns.x)
            r = "all" if ns.r is None else ns.r
            w.writerows([("statistic", "x", "m", "d", "r", "value"), ("sigma", ns.x, ns.m, ns.d, r, repr(value))])
        return
    _require(ns, "a", "b")
    params = primeset.make_params(ns.a, ns.b)
    if ns.stat == "bt":
        _require(ns, "m", "mprime", "y")
        bt = moments.bt_average(params, ns.m, ns.mprime, ns.y, ns.eps)
        w.writerows([
            ("statistic", "a", "b", "m", "mprime", "y", "eps", "lhs", "rhs_shape", "counts", "progression_count", "value"),
            ("bt", ns.a, ns.b, ns.m, ns.mprime, ns.y, ns.eps, bt.lhs, repr(bt.rhs_shape),
             " ".join(map(str, bt.counts)), bt.progression_count, repr(bt.ratio)),
        ])
    else:
        _require(ns, "x")
        hits, total = moments.phi_tail_counts(params, ns.k, ns.w, ns.lam, ns.x)
        k = params.modulus if ns.k is None else ns.k
        w.writerows([
            ("statistic", "a", "b", "k", "w", "lambda", "x", "hits", "total", "value"),
            ("phitail", ns.a, ns.b, k, ns.w, ns.lam, ns.x, hits, total, repr(hits / total if total else 0.0)),
        ])


def _galois(ns, out) -> None:
    if ns.check == "classes":
        text = galois.classes_to_json(galois.conjugacy_classes(ns.m, ns.mprime))
    elif ns.check == "fixing":
        if ns.r >= ns.mprime:
            raise ValueError(f"need 0 <= r < m' = {ns.mprime}, got r = {ns.r}")
        text = galois.classes_to_json(galois.classes_fixing_Kr(ns.m, ns.mprime, ns.r))
    else:
        text = json.dumps({"m": ns.m, "mprime": ns.mprime, "disjoint": galois.verify_disjointness(ns.m, ns.mprime)})
    out.write(text + "\n")


def _construct(ns, out) -> None:
    out.write(construct.construct_counterexample(ns.p, ns.budget).to_json() + "\n")


_HANDLERS = {
    "scan": _scan,
    "cover": _cover,
    "density": _density,
    "moments": _moments,
    "galois": _galois,
    "construct": _construct,
    "defaults": lambda ns, out: out.write(json.dumps(DEFAULTS, indent=2, sort_keys=True) + "\n"),
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports bad usage with code 2
        return int(exc.code or 0)
    if ns.threads is None:
        ns.threads = _available_threads()
    try:
        _HANDLERS[ns.cmd](ns, out)
    except (ValueError, construct.BudgetExhausted, FileNotFoundError) as exc:
        print(f"shiftexp {ns.cmd}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"shiftexp {ns.cmd}: internal error: {exc!r}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
