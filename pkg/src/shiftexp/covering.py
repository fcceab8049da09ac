"""How the progressions n = l(p) (mod ord_p(a)) cover the exponents n <= x.

Every n in such a progression has p | a^n - b; for n != l(p) that divisor is
proper, so a^n - b is composite. The sieve counts, for each n, how many
progressions hit it.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .modarith import pow_mod
from .primeset import Params, PrimeRecord
from .sieve import simple_sieve

SATURATE = 255
MIN_PROFILE_N = 16


class Domain(enum.Enum):
    ALL_INTEGERS = "all"
    PRIMES_ONLY = "primes"


@dataclass(frozen=True)
class CoverReport:
    x_limit: int
    prime_cutoff: int
    covered_count: int
    uncovered_density: Fraction
    omega_histogram: dict[int, int]
    domain: Domain = Domain.ALL_INTEGERS
    # per-n covering counts (index n, saturating at 255); kept for profiles
    counts: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> str:
        return json.dumps(
            {
                "x_limit": self.x_limit,
                "prime_cutoff": self.prime_cutoff,
                "covered_count": self.covered_count,
                "uncovered_density": float(self.uncovered_density),
                "omega_histogram": {str(k): v for k, v in sorted(self.omega_histogram.items())},
            },
            sort_keys=False,
        )


def _domain_mask(x_limit: int, domain: Domain) -> np.ndarray:
    if domain is Domain.ALL_INTEGERS:
        mask = np.ones(x_limit + 1, dtype=bool)
    else:
        mask = np.zeros(x_limit + 1, dtype=bool)
        mask[simple_sieve(x_limit)] = True
    mask[0] = False
    return mask


def cover_counts(records: Iterable[PrimeRecord], x_limit: int) -> np.ndarray:
    """Counts array c with c[n] = #{p : n = l(p) mod ord_p(a), n != l(p)} for 1 <= n <= x_limit."""
    counts = np.zeros(x_limit + 1, dtype=np.uint8)
    for rec in records:
        if rec.ell is None or rec.ord is None:
            raise ValueError(f"record for p = {rec.p} has no discrete log")
        start = rec.ell % rec.ord
        if start == 0:
            start = rec.ord
        if start == rec.ell:
            start += rec.ord
        if start > x_limit:
            continue
        view = counts[start :: rec.ord]
        view[view < SATURATE] += 1
    counts[0] = 0
    return counts


def cover_sieve(
    records: Sequence[PrimeRecord],
    x_limit: int,
    prime_cutoff: int,
    domain: Domain | str = Domain.ALL_INTEGERS,
) -> CoverReport:
    domain = Domain(domain)
    for rec in records:
        if not rec.in_S:
            raise ValueError(f"record for p = {rec.p} is not in S")
        if rec.p > prime_cutoff:
            raise ValueError(f"record p = {rec.p} exceeds prime_cutoff = {prime_cutoff}")
    counts = cover_counts(records, x_limit)
    mask = _domain_mask(x_limit, domain)
    in_domain = counts[mask]
    size = int(mask.sum())
    covered = int(np.count_nonzero(in_domain))
    values, freq = np.unique(in_domain, return_counts=True)
    hist = {int(v): int(f) for v, f in zip(values, freq)}
    density = Fraction(size - covered, size) if size else Fraction(1)
    return CoverReport(x_limit, prime_cutoff, covered, density, hist, domain, counts)


def witness_check(n: int, record: PrimeRecord, params: Params) -> bool:
    """Recompute a^n mod p from scratch and compare with b; must always hold."""
    if record.ell is None or record.ord is None:
        raise ValueError(f"record for p = {record.p} has no discrete log")
    if n < 0 or (n - record.ell) % record.ord:
        raise ValueError(f"n = {n} is not = {record.ell} mod {record.ord}")
    return pow_mod(params.a, n, record.p) == params.b % record.p


def omega_lower_profile(report: CoverReport, c_grid: Iterable[float]) -> dict[float, float]:
    """For each c, the share of domain n in [16, x_limit] with coverage >= c log log n."""
    if report.counts is None:
        raise ValueError("report carries no per-n counts")
    mask = _domain_mask(report.x_limit, report.domain)
    mask[:MIN_PROFILE_N] = False
    ns = np.flatnonzero(mask)
    if ns.size == 0:
        return {c: 0.0 for c in c_grid}
    loglog = np.log(np.log(ns.astype(np.float64)))
    cov = report.counts[ns].astype(np.float64)
    return {c: float(np.count_nonzero(cov >= c * loglog)) / ns.size for c in c_grid}


def _crt(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int] | None:
    """Solve n = r_i (mod m_i) for arbitrary moduli; None when incompatible."""
    r, m = 0, 1
    for ri, mi in zip(residues, moduli):
        g = math.gcd(m, mi)
        if (ri - r) % g:
            return None
        step = (ri - r) // g * pow(m // g, -1, mi // g) % (mi // g) if mi // g > 1 else 0
        r += m * step
        m = m * mi // g
        r %= m
    return r, m


def _count_class(r: int, m: int, x: int) -> int:
    """#{1 <= n <= x : n = r (mod m)}."""
    return (x - r) // m - (0 - r) // m


def uncovered_count_inclusion_exclusion(records: Sequence[PrimeRecord], x: int) -> int:
    """Exact count of uncovered n in [1, x] by inclusion-exclusion over record subsets."""
    recs = list(records)
    covered = 0
    for size in range(1, len(recs) + 1):
        for sub in combinations(recs, size):
            sol = _crt([r.ell for r in sub], [r.ord for r in sub])
            if sol is None:
                continue
            n0, L = sol
            hits = _count_class(n0, L, x)
            # n = l(p) is excluded from the progression of p
            hits -= len({r.ell for r in sub if 1 <= r.ell <= x and (r.ell - n0) % L == 0})
            covered += hits if size % 2 else -hits
    return x - covered


def nested_cutoff_reports(
    records: Sequence[PrimeRecord], x_limit: int, cutoffs: Sequence[int], domain: Domain | str = Domain.ALL_INTEGERS
) -> list[CoverReport]:
    recs = sorted((r for r in records if r.in_S), key=lambda r: r.p)
    return [cover_sieve([r for r in recs if r.p <= c], x_limit, c, domain) for c in cutoffs]

