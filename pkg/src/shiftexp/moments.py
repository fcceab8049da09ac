"""Second-moment statistics for the covering events, plus the conjectural averages.

For p in S the event A_p is {n <= x : n = l(p) (mod ord_p(a)), n != l(p)} under the
uniform measure on [1, x]. All pair counts here are exact integer counts, so the
second-moment ratio is >= 1 at every finite x by Cauchy-Schwarz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable

import numpy as np

from .modarith import euler_phi, is_kth_power_residue
from .primeset import Params, PrimeRecord
from .sieve import phi_table, prime_segments, simple_sieve


def _s_upto(records: Iterable[PrimeRecord], bound: int) -> list[PrimeRecord]:
    out = [r for r in records if r.in_S and r.p <= bound]
    for r in out:
        if r.ell is None or r.ord is None:
            raise ValueError(f"S-record for p = {r.p} lacks ord or l")
    return sorted(out, key=lambda r: r.p)


def mu_sum(records: Iterable[PrimeRecord], x: int) -> float:
    """Sum of 1/ord_p(a) over p in S with p <= sqrt(x)."""
    return math.fsum(1 / r.ord for r in _s_upto(records, isqrt(x)))


def event_count(rec: PrimeRecord, x: int) -> int:
    """|A_p| on [1, x]."""
    n = (x - rec.ell) // rec.ord - (-rec.ell) // rec.ord
    return n - (1 <= rec.ell <= x)


def pair_count(rp: PrimeRecord, rq: PrimeRecord, x: int) -> int:
    """|A_p & A_q| on [1, x] by CRT; zero unless gcd(ord_p, ord_q) | l(p) - l(q)."""
    if rp.p == rq.p:
        return event_count(rp, x)
    g = gcd(rp.ord, rq.ord)
    if (rp.ell - rq.ell) % g:
        return 0
    L = rp.ord // g * rq.ord
    k = (rq.ell - rp.ell) // g * pow(rp.ord // g, -1, rq.ord // g) % (rq.ord // g) if rq.ord > g else 0
    n0 = (rp.ell + rp.ord * k) % L
    count = (x - n0) // L - (-n0) // L
    for ell in {rp.ell, rq.ell}:
        if 1 <= ell <= x and (ell - n0) % L == 0:
            count -= 1
    return count


@dataclass(frozen=True)
class SecondMoment:
    x: int
    numerator: Fraction  # sum over ordered pairs (p, q) of Pr(A_p & A_q)
    denominator: Fraction  # (sum over p of Pr(A_p))^2
    n_primes: int

    @property
    def ratio(self) -> Fraction:
        return self.numerator / self.denominator


def second_moment(records: Iterable[PrimeRecord], x: int) -> SecondMoment:
    recs = _s_upto(records, isqrt(x))
    if not recs:
        raise ValueError(f"no S-primes up to sqrt({x})")
    diag = [event_count(r, x) for r in recs]
    off = 0
    for i, rp in enumerate(recs):
        for rq in recs[i + 1 :]:
            off += pair_count(rp, rq, x)
    num = Fraction(sum(diag) + 2 * off, x)
    den = Fraction(sum(diag), x) ** 2
    return SecondMoment(x, num, den, len(recs))


def second_moment_ratio(records: Iterable[PrimeRecord], x: int) -> Fraction:
    out = second_moment(records, x).ratio
    # Cauchy-Schwarz: (sum_n N(n))^2 <= x sum_n N(n)^2
    assert out >= 1, f"second-moment ratio {out} < 1"
    return out


def sigma_mdr(records: Iterable[PrimeRecord], m: int, d: int, r: int, x: int) -> float:
    """(sum of 1/(p - 1) over p in S_{m,d,r}, p <= sqrt(x))^2, membership read off the records."""
    total = math.fsum(
        1 / (rec.p - 1)
        for rec in _s_upto(records, isqrt(x))
        if rec.ord % (m * d) == 0 and (rec.ell - r) % m == 0
    )
    return total * total


def sigma_md(records: Iterable[PrimeRecord], m: int, d: int, x: int) -> float:
    recs = list(records)
    return math.fsum(sigma_mdr(recs, m, d, r, x) for r in range(m))


@dataclass(frozen=True)
class BTAverage:
    lhs: int
    rhs_shape: float
    counts: tuple[int, ...]  # per r
    progression_count: int  # pi(y; m, 1)

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs_shape if self.rhs_shape else math.inf


def bt_average(params: Params, m: int, mp: int, y: int, eps: float = 0.5, exclude_Lq: bool = False) -> BTAverage:
    """Sum over r < m' of #{p <= y splitting in Q(zeta_m, (b a^-r)^(1/m'))}^2.

    Splitting means p = 1 (mod m) and b a^-r is an m'-th power residue. With
    exclude_Lq, primes at which a is itself an m'-th power residue are dropped;
    those primes split for every r or for none.
    """
    if mp < 2 or any(mp % q == 0 for q in range(2, isqrt(mp) + 1)):
        raise ValueError(f"m' must be prime, got {mp}")
    if m % mp:
        raise ValueError(f"m' = {mp} must divide m = {m}")
    counts = [0] * mp
    base = 0
    ab = params.a * params.b
    for seg in prime_segments(2, y + 1):
        for p in seg[seg % m == 1].tolist():
            if ab % p == 0:
                continue
            base += 1
            if exclude_Lq and is_kth_power_residue(params.a, mp, p):
                continue
            ainv = pow(params.a, -1, p)
            for r in range(mp):
                if is_kth_power_residue(params.b * pow(ainv, r, p), mp, p):
                    counts[r] += 1
    lhs = sum(c * c for c in counts)
    rhs = 0.0
    if y > 2:
        logy = math.log(y)
        rhs = y * y / (euler_phi(m) ** 2 * logy**2) * max(1 / logy**2, mp ** (-eps))
    return BTAverage(lhs, rhs, tuple(counts), base)


def phi_tail_counts(params: Params, k: int | None, w: int, lam: float, x: int) -> tuple[int, int]:
    """(#{p <= x in both classes with (p-1)/phi(p-1) > lam k/phi(k)}, #{p <= x in both classes}).

    The classes are p = 1 (mod k) and p = 2 (mod W), W the product of the odd
    primes <= w not dividing k. k defaults to 4|ab|h.
    """
    if k is None:
        k = params.modulus
    if lam < 1:
        raise ValueError(f"lambda must be >= 1, got {lam}")
    W = 1
    for q in simple_sieve(w).tolist():
        if q != 2 and k % q:
            W *= q
    if W * k > isqrt(x):
        raise ValueError(f"need Wk <= sqrt(x); W = {W}, k = {k}, x = {x}")
    P = np.concatenate(list(prime_segments(2, x + 1)))
    P = P[(P % k == 1 % k) & (P % W == 2 % W)]
    phi = phi_table(int(P[-1]) - 1) if P.size else np.zeros(1, dtype=np.int64)
    lam_q = Fraction(lam)
    # (p - 1)/phi(p - 1) > lam k/phi(k)  <=>  (p - 1) phi(k) > lam k phi(p - 1)
    lhs = (P - 1).astype(object) * (euler_phi(k) * lam_q.denominator)
    rhs = phi[P - 1].astype(object) * (lam_q.numerator * k)
    hits = int(np.count_nonzero(lhs > rhs))
    return hits, int(P.size)


def phi_tail(params: Params, k: int | None, w: int, lam: float, x: int) -> float:
    hits, total = phi_tail_counts(params, k, w, lam, x)
    return hits / total if total else 0.0

