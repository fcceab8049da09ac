"""Obstructions to primes along a^(qn+r) - b: fixed prime divisors and reducible binomials.

Also builds the counterexample family: sequences a^n - b that pass both checks
at q = 1 but fail them along every residue class modulo a prime p.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .modarith import factorize, is_perfect_kth_power, is_prime, perfect_power_order
from .sieve import primes_in_range


def fixed_divisor(a: int, b: int, q: int, r: int, search_bound: int) -> int | None:
    """Least prime p <= search_bound dividing a^(qn+r) - b for every n >= 0."""
    if q < 1 or not 1 <= r <= q:
        raise ValueError(f"need q >= 1 and 1 <= r <= q, got q = {q}, r = {r}")
    for p in primes_in_range(2, search_bound + 1).tolist():
        if a % p == 0:
            # a^(qn+r) = 0 mod p since r >= 1
            if b % p == 0:
                return p
            continue
        # ord_p(a) | q and a^r = b
        if pow(a, q, p) == 1 and (pow(a, r, p) - b) % p == 0:
            return p
    return None


def _is_rational_power(x: Fraction, m: int) -> bool:
    """x is the m-th power of a rational (x is in lowest terms)."""
    if x < 0 and m % 2 == 0:
        return False
    return is_perfect_kth_power(abs(x.numerator), m) and is_perfect_kth_power(x.denominator, m)


def binomial_reducible(a: int, b: int, q: int, r: int) -> bool:
    """True iff x^q - b a^-r is reducible over Q (Capelli's criterion)."""
    if q < 1 or not 1 <= r <= q:
        raise ValueError(f"need q >= 1 and 1 <= r <= q, got q = {q}, r = {r}")
    x = Fraction(b, a**r)
    for m in factorize(q) if q > 1 else {}:
        if _is_rational_power(x, m):
            return True
    return q % 4 == 0 and x < 0 and _is_rational_power(-x / 4, 4)


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Counterexample:
    p: int
    a: int
    b: int
    c: int
    q_list: tuple[int, ...]
    checks: dict = field(default_factory=dict, compare=False)

    @property
    def verified(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_json(self) -> str:
        return json.dumps({"a": self.a, "b": self.b, "q_list": list(self.q_list), "verified": self.verified})


def _progression_primes(p: int, count: int, budget: int) -> list[int]:
    mod = p * p
    out = []
    n = mod + 1
    while len(out) < count:
        if n > budget * mod:
            raise BudgetExhausted(f"fewer than {count} primes = 1 mod {mod} below {budget * mod}")
        if n % 2 and is_prime(n):
            out.append(n)
        n += mod
    return out


def verify_counterexample(p: int, a: int, b: int, q_list: tuple[int, ...]) -> dict[str, bool]:
    bound = max(a, *q_list)
    checks = {
        "no_fixed_divisor": fixed_divisor(a, b, 1, 1, bound) is None,
        "irreducible": not binomial_reducible(a, b, 1, 1) and perfect_power_order(a) == 1,
        f"reducible_r{p}": binomial_reducible(a, b, p, p),
        "b_is_pth_power": b > 0 and is_perfect_kth_power(b, p),
    }
    for i, qi in enumerate(q_list, start=1):
        checks[f"fixed_divisor_r{i}"] = fixed_divisor(a, b, p, i, max(q_list)) == qi
    return checks


def _crt_residues(choices: list[list[int]], moduli: tuple[int, ...]) -> list[int]:
    """All CRT combinations of per-modulus residue choices, sorted, modulo prod(moduli)."""
    out = [0]
    mod = 1
    for opts, q in zip(choices, moduli):
        inv = pow(mod, -1, q)
        out = [x + mod * ((o - x) * inv % q) for x in out for o in opts]
        mod *= q
    return sorted(out)


def _least_in_classes(residues: list[int], mod: int, ok, budget: int) -> int:
    """Least n >= 2 in one of the given residue classes with ok(n)."""
    tries = 0
    for k in range(budget + 1):
        for res in residues:
            n = res + k * mod
            if n < 2:
                continue
            if ok(n):
                return n
            tries += 1
            if tries > budget:
                raise BudgetExhausted(f"search exceeded {budget} candidates")
    raise BudgetExhausted(f"search exceeded {budget} candidates")


def construct_counterexample(p: int, search_budget: int = 10**6) -> Counterexample:
    """Deterministic search for (a, b = c^p) following the necessity construction.

    q_1 < ... < q_{p-1} are the least odd primes = 1 (mod p^2); a is the least even
    non-perfect-power above them with ord_{q_i}(a) = p; c is the least c > 1 with
    c^p = a^i (mod q_i), gcd(c, a) = 1 and gcd(c^p - 1, a - 1) = 1. Both searches
    walk CRT classes mod q_1 ... q_{p-1} in increasing order.
    """
    if not is_prime(p) or p > 5:
        raise ValueError(f"p must be a prime <= 5, got {p}")
    qs = tuple(_progression_primes(p, p - 1, search_budget))
    Q = 1
    for qi in qs:
        Q *= qi
    order_p = [[x for x in range(2, qi) if pow(x, p, qi) == 1] for qi in qs]
    a = _least_in_classes(
        _crt_residues(order_p, qs), Q,
        lambda n: n > max(qs) and n % 2 == 0 and perfect_power_order(n) == 1,
        search_budget,
    )
    roots = [[x for x in range(1, qi) if pow(x, p, qi) == pow(a, i, qi)] for i, qi in enumerate(qs, start=1)]
    c = _least_in_classes(
        _crt_residues(roots, qs), Q,
        lambda n: gcd(n, a) == 1 and gcd(n**p - 1, a - 1) == 1,
        search_budget,
    )
    b = c**p
    return Counterexample(p, a, b, c, qs, verify_counterexample(p, a, b, qs))
