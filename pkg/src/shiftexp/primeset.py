"""Prime records for a shifted exponential a^n - b, and the prime sets built from them.

A record carries ord_p(a) and the least nonnegative discrete log of b to base a.
Membership tests cover the equidistribution set S, its refinements S_{m,d,r},
the relaxed sets S'_{m,d,r} and T_m, and the W-trick variant of S used for
prime exponents.
"""

from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from math import gcd
from typing import Iterable, Iterator, TextIO

from .modarith import (
    discrete_log,
    factorize,
    inverse_mod,
    is_kth_power_residue,
    mult_order,
    perfect_power_order,
)
from .sieve import prime_segments, simple_sieve

MAX_XMAX = 10**9
CSV_HEADER = ("p", "ord", "ell", "in_S")


class Mode(enum.Enum):
    ALL_EXPONENTS = "all"
    PRIME_EXPONENTS = "prime"


class ParamsError(ValueError):
    """(a, b) violates an assumption of the chosen mode."""


@dataclass(frozen=True)
class Params:
    a: int
    b: int
    h: int
    h_a: int = 1
    h_b: int = 1
    w: int = 0
    W: int = 1
    mode: Mode = Mode.ALL_EXPONENTS

    @property
    def modulus(self) -> int:
        """4|ab|h, the congruence every prime of S satisfies."""
        return 4 * abs(self.a * self.b) * self.h


def make_params(a: int, b: int, mode: Mode | str = Mode.ALL_EXPONENTS, w: int = 0) -> Params:
    mode = Mode(mode)
    if a <= 1:
        raise ParamsError(f"need a > 1, got a = {a}")
    if b == 0:
        raise ParamsError("need b != 0")
    if mode is Mode.ALL_EXPONENTS:
        if gcd(a, b) != 1:
            raise ParamsError(f"all-exponents mode needs gcd(a, b) = 1, got gcd = {gcd(a, b)}")
        if perfect_power_order(a) > 1:
            raise ParamsError(f"all-exponents mode needs a not a perfect power, got a = {a}")
        h = perfect_power_order(b)
        return Params(a, b, h=h, h_a=1, h_b=h, mode=mode)
    if (a, b) == (2, 1):
        raise ParamsError("prime-exponent mode excludes the Mersenne case (a, b) = (2, 1)")
    h_a = perfect_power_order(a)
    h_b = perfect_power_order(b)
    h = h_a * h_b
    W = 1
    for p in simple_sieve(w).tolist():
        if (2 * a * b * h) % p:
            W *= p
    # 2 | 2abh keeps W odd, so the class 2 mod W is a unit class
    assert W % 2 == 1
    return Params(a, b, h=h, h_a=h_a, h_b=h_b, w=w, W=W, mode=mode)


@dataclass(frozen=True)
class PrimeRecord:
    p: int
    ord: int | None = None
    ell: int | None = None
    in_S: bool = False


def _check_prime(p: int, params: Params) -> None:
    if (2 * params.a * params.b) % p == 0:
        raise ValueError(f"p = {p} divides 2ab = {2 * params.a * params.b}")


def _order_and_log(p: int, params: Params) -> tuple[int, int | None]:
    o = mult_order(params.a, p, factorize(p - 1))
    return o, discrete_log(params.a, params.b, p, o)


def in_S(p: int, params: Params, ord_a: int | None = None) -> bool:
    _check_prime(p, params)
    two_h = 2 * params.h
    if p % params.modulus != 1:
        return False
    if params.mode is Mode.PRIME_EXPONENTS:
        if params.W > 1 and p % params.W != 2 % params.W:
            return False
        target = (p - 1) // two_h
        fac = factorize(p - 1)
        if ord_a is None:
            ord_a = mult_order(params.a, p, fac)
        return ord_a == target and mult_order(params.b, p, fac) == target
    if not (is_kth_power_residue(params.a, two_h, p) and is_kth_power_residue(params.b, two_h, p)):
        return False
    if ord_a is None:
        ord_a = mult_order(params.a, p)
    return ord_a == (p - 1) // two_h


def in_S_mdr(p: int, m: int, d: int, r: int, params: Params) -> bool:
    """Membership in S_{m,d,r} through the 2hm-th power residue criterion."""
    if not in_S(p, params):
        return False
    o = mult_order(params.a, p)
    if o % (m * d):
        return False
    x = params.b * inverse_mod(pow(params.a, r, p), p)
    return is_kth_power_residue(x, 2 * params.h * m, p)


def in_S_mdr_direct(p: int, m: int, d: int, r: int, params: Params) -> bool:
    """Membership in S_{m,d,r} by computing l(p) and reducing it mod m."""
    if not in_S(p, params):
        return False
    o, ell = _order_and_log(p, params)
    return o % (m * d) == 0 and ell is not None and (ell - r) % m == 0


def in_S_prime_mdr(p: int, m: int, d: int, r: int, params: Params) -> bool:
    _check_prime(p, params)
    if (p - 1) % (2 * params.h * m * d):
        return False
    x = params.b * inverse_mod(pow(params.a, r, p), p)
    return is_kth_power_residue(x, 2 * params.h * m, p)


def in_T_m(p: int, m: int, params: Params) -> bool:
    _check_prime(p, params)
    two_h = 2 * params.h
    if (p - 1) % (two_h * m):
        return False
    if m == 1:
        return True
    return not any(is_kth_power_residue(params.a, two_h * q, p) for q in factorize(m))


def make_record(p: int, params: Params) -> PrimeRecord:
    """Record for one prime; ord and l are left empty when the prefilter rejects p."""
    if (2 * params.a * params.b) % p == 0 or p % params.modulus != 1:
        return PrimeRecord(p)
    o, ell = _order_and_log(p, params)
    return PrimeRecord(p, o, ell, in_S(p, params, o))


def complete_record(rec: PrimeRecord, params: Params) -> PrimeRecord:
    """Fill in ord and l for a record the prefilter skipped."""
    if rec.ord is not None or (2 * params.a * params.b) % rec.p == 0:
        return rec
    o, ell = _order_and_log(rec.p, params)
    return replace(rec, ord=o, ell=ell)


def _records_chunk(args: tuple[Params, int, int]) -> list[PrimeRecord]:
    params, lo, hi = args
    return [make_record(p, params) for seg in prime_segments(lo, hi) for p in seg.tolist()]


def stream_records(
    params: Params,
    x_max: int,
    lo: int = 0,
    hi: int | None = None,
    workers: int = 1,
) -> Iterator[PrimeRecord]:
    """Records for every prime in [lo, hi) (hi defaults to x_max + 1), ascending."""
    if x_max > MAX_XMAX:
        raise ValueError(f"x_max = {x_max} exceeds the supported range {MAX_XMAX}")
    hi = x_max + 1 if hi is None else min(hi, x_max + 1)
    if hi <= lo:
        return
    if workers <= 1:
        for seg in prime_segments(lo, hi):
            for p in seg.tolist():
                yield make_record(p, params)
        return
    step = max(1, -(-(hi - lo) // (4 * workers)))
    chunks = [(params, s, min(s + step, hi)) for s in range(lo, hi, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for recs in pool.map(_records_chunk, chunks):
            yield from recs


def s_records(params: Params, x_max: int, workers: int = 1) -> list[PrimeRecord]:
    return [r for r in stream_records(params, x_max, workers=workers) if r.in_S]


def count_S(params: Params, x: int) -> tuple[int, int]:
    """(pi_S(x), pi(x)) without computing any discrete logs."""
    hits = total = 0
    for seg in prime_segments(2, x + 1):
        total += int(seg.size)
        for p in seg[seg % params.modulus == 1].tolist():
            if in_S(p, params):
                hits += 1
    return hits, total


def write_records_csv(records: Iterable[PrimeRecord], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow((
            r.p,
            "" if r.ord is None else r.ord,
            "" if r.ell is None else r.ell,
            int(r.in_S),
        ))


def read_records_csv(src: TextIO) -> list[PrimeRecord]:
    reader = csv.reader(src)
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != CSV_HEADER:
        raise ValueError(f"unexpected record header {header}, want {','.join(CSV_HEADER)}")
    out = []
    for row in reader:
        if not row:
            continue
        p, o, ell, flag = row
        out.append(PrimeRecord(
            int(p),
            int(o) if o else None,
            int(ell) if ell else None,
            flag.strip().lower() in ("1", "true"),
        ))
    return out


def records_to_csv(records: Iterable[PrimeRecord]) -> str:
    buf = io.StringIO()
    write_records_csv(records, buf)
    return buf.getvalue()
