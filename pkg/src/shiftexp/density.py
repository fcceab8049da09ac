"""Kummer degree formulas and Lenstra-style density predictions for the sets S_{m,d,r}."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .modarith import divisors, euler_phi, factorize, is_kth_power_residue, lcm, mobius, mult_order, perfect_power_order, q_of_ell
from .primeset import Mode, Params, count_S, in_S_mdr
from .sieve import prime_segments, simple_sieve

DEFAULT_PRIME_BOUND = 10**5
_DPS = 40


class HypothesisError(ValueError):
    """A divisibility hypothesis of a degree formula does not hold."""


def _require(cond: bool, what: str) -> None:
    if not cond:
        raise HypothesisError(what)


def degree_F(t: int, s: int, m: int, params: Params) -> int:
    """[Q(zeta_t, a^(1/s), (b a^-r)^(1/2hm)) : Q] = phi(t) m s / 2, for any r."""
    _require(params.mode is Mode.ALL_EXPONENTS, "degree_F needs all-exponents parameters")
    h = params.h
    _require(t % params.modulus == 0, f"4|ab|h = {params.modulus} must divide t = {t}")
    _require(t % m == 0, f"m = {m} must divide t = {t}")
    _require(t % s == 0, f"s = {s} must divide t = {t}")
    _require(s % (2 * h) == 0, f"2h = {2 * h} must divide s = {s}")
    return euler_phi(t) * m * s // 2


def degree_two_base(V: int, s: int, t: int, params: Params) -> int:
    """[Q(zeta_V, a^(1/s), b^(1/t)) : Q] = phi(V) (s / 2h_a) (t / 2h_b)."""
    two_h = 2 * params.h
    _require(V % params.modulus == 0, f"4|ab|h = {params.modulus} must divide V = {V}")
    _require(V % s == 0 and V % t == 0, f"s = {s} and t = {t} must divide V = {V}")
    _require(s % two_h == 0 and t % two_h == 0, f"2h = {two_h} must divide s = {s} and t = {t}")
    return euler_phi(V) * (s // (2 * params.h_a)) * (t // (2 * params.h_b))


def degree_three(V: int, s: int, t: int, u: int, r: int, params: Params) -> int:
    """[Q(zeta_V, a^(1/s), b^(1/t), (b a^-r)^(1/u)) : Q] for gcd(r, u) = 1."""
    h_a, h_b = params.h_a, params.h_b
    _require(V % params.modulus == 0, f"4|ab|h = {params.modulus} must divide V = {V}")
    _require(all(V % x == 0 for x in (s, t, u)), f"s, t, u = {s, t, u} must divide V = {V}")
    _require(s % (2 * h_a) == 0, f"2h_a = {2 * h_a} must divide s = {s}")
    _require(t % (2 * h_b) == 0, f"2h_b = {2 * h_b} must divide t = {t}")
    _require(u % (2 * h_a * h_b) == 0, f"2h_a h_b = {2 * h_a * h_b} must divide u = {u}")
    _require(gcd(r, u) == 1, f"need gcd(r, u) = 1, got r = {r}, u = {u}")
    return euler_phi(V) * (s // (2 * h_a)) * (t // (2 * h_b)) * (u // gcd(gcd(s, t), u))


def _check_mdr(m: int, d: int, r: int, params: Params) -> None:
    _require(
        m % (2 * abs(params.a * params.b)) == 0 or (m, d, r) == (1, 1, 0),
        f"need m = 0 mod 2|ab| = {2 * abs(params.a * params.b)} or (m, d, r) = (1, 1, 0)",
    )


def _q_of(k: int, h: int) -> int:
    out = 1
    if k > 1:
        for ell in factorize(k):
            out *= q_of_ell(ell, h)
    return out


def compositum_degree(k: int, m: int, d: int, params: Params) -> int:
    """[F_{m,d,r} L_k : Q] for squarefree k."""
    h = params.h
    qk = _q_of(k, h)
    t = lcm(params.modulus, 2 * h * m * d, qk)
    s = lcm(2 * h, qk)
    return degree_F(t, s, m, params)


def fixing_probability(m: int, d: int, r: int, params: Params) -> Fraction:
    """Chebotarev density 1/[F_{m,d,r} : Q] of primes splitting completely in F."""
    _check_mdr(m, d, r, params)
    return Fraction(1, compositum_degree(1, m, d, params))


def local_density(n: int, m: int, d: int, r: int, params: Params) -> Fraction:
    """Share of Gal(F L_n / Q) fixing F_{m,d,r} and none of the L_ell, ell | n.

    Inclusion-exclusion over k | n: the elements fixing F L_k make up 1/[F L_k : Q]
    of the group, so a_n = sum_k mu(k) / [F L_k : Q].
    """
    _check_mdr(m, d, r, params)
    if n < 1 or mobius(n) == 0:
        raise HypothesisError(f"n = {n} must be squarefree")
    total = Fraction(0)
    for k in divisors(n):
        total += Fraction(mobius(k), compositum_degree(k, m, d, params))
    return total


def exceptional_modulus(m: int, d: int, params: Params) -> int:
    """Product of the primes dividing 2abhmd."""
    out = 1
    for ell in factorize(abs(2 * params.a * params.b * params.h * m * d)):
        out *= ell
    return out


@dataclass(frozen=True)
class DensityEstimate:
    analytic_value: float
    truncation_level: int
    tail_bound: float
    empirical_value: float | None = None
    sample_x: int | None = None
    local_factor: Fraction | None = None

    def __post_init__(self):
        if (self.empirical_value is None) != (self.sample_x is None):
            raise ValueError("empirical_value and sample_x go together")

    def to_json(self) -> str:
        return json.dumps({
            "analytic": self.analytic_value,
            "truncation": self.truncation_level,
            "tail_bound": self.tail_bound,
            "empirical": self.empirical_value,
            "sample_x": self.sample_x,
        })


def euler_product(n: int, params: Params, prime_bound: int) -> mpmath.mpf:
    """prod over primes ell <= prime_bound, ell not dividing n, of (1 - 1/[L_ell : Q])."""
    with mpmath.workdps(_DPS):
        prod = mpmath.mpf(1)
        for ell in simple_sieve(prime_bound).tolist():
            if n % ell == 0:
                continue
            q = q_of_ell(ell, params.h)
            prod *= 1 - mpmath.mpf(1) / (euler_phi(q) * q)
        return prod


def global_density(
    m: int, d: int, r: int, params: Params, prime_bound: int = DEFAULT_PRIME_BOUND
) -> DensityEstimate:
    n = exceptional_modulus(m, d, params)
    a_n = local_density(n, m, d, r, params)
    with mpmath.workdps(_DPS):
        value = mpmath.mpf(a_n.numerator) / a_n.denominator * euler_product(n, params, prime_bound)
    # sum over ell > B of 1/(ell (ell - 1)) <= 1/B
    return DensityEstimate(float(value), n, 1.0 / prime_bound, local_factor=a_n)


def empirical_density(m: int, d: int, r: int, params: Params, x: int) -> float:
    """pi_{S_{m,d,r}}(x) / pi(x) by direct scan."""
    if (m, d, r) == (1, 1, 0):
        hits, total = count_S(params, x)
        return hits / total
    hits = total = 0
    for seg in prime_segments(2, x + 1):
        total += int(seg.size)
        for p in seg[seg % params.modulus == 1].tolist():
            hits += in_S_mdr(p, m, d, r, params)
    return hits / total


def with_empirical(est: DensityEstimate, m: int, d: int, r: int, params: Params, x: int) -> DensityEstimate:
    return DensityEstimate(
        est.analytic_value, est.truncation_level, est.tail_bound,
        empirical_density(m, d, r, params, x), x, est.local_factor,
    )


def splitting_frequency(params: Params, x: int, modulus: int, powers: list[tuple[int, int]]) -> float:
    """Share of primes p <= x with p = 1 (mod modulus) and each (value, k) a k-th power residue.

    This is the complete-splitting frequency of Q(zeta_modulus, value^(1/k), ...).
    """
    hits = total = 0
    for seg in prime_segments(2, x + 1):
        total += int(seg.size)
        for p in seg[seg % modulus == 1].tolist():
            if all(v % p and is_kth_power_residue(v, k, p) for v, k in powers):
                hits += 1
    return hits / total


def splitting_frequency_F(t: int, s: int, m: int, r: int, params: Params, x: int) -> float:
    """Complete splitting in Q(zeta_t, a^(1/s), (b a^-r)^(1/2hm))."""
    hits = total = 0
    k = 2 * params.h * m
    for seg in prime_segments(2, x + 1):
        total += int(seg.size)
        for p in seg[seg % t == 1].tolist():
            if (params.a * params.b) % p == 0:
                continue
            twisted = params.b * pow(params.a, -r, p)
            if is_kth_power_residue(params.a, s, p) and is_kth_power_residue(twisted, k, p):
                hits += 1
    return hits / total


def order_index_density(params: Params, x: int) -> float:
    """Share of p <= x with p | a^n - b for some n and ord_p(a) = (p - 1)/2k.

    k is the largest integer with b a perfect k-th power (k = 1 when |b| = 1).
    """
    k = perfect_power_order(params.b)
    if params.b < 0:
        while k % 2 == 0:
            k //= 2
    hits = total = 0
    for seg in prime_segments(2, x + 1):
        total += int(seg.size)
        for p in seg[seg % (2 * k) == 1].tolist():
            if (params.a * params.b) % p == 0:
                continue
            o = mult_order(params.a, p)
            if o == (p - 1) // (2 * k) and pow(params.b % p, o, p) == 1:
                hits += 1
    return hits / total
