"""Modular arithmetic kernel: powers, orders, discrete logs, residue tests, factoring.

Everything here is a pure function of its arguments. Moduli are expected to stay
below 2**62; Python integers make the products exact regardless.
"""

from __future__ import annotations

import random
from math import gcd, isqrt

import gmpy2

MAX_MODULUS = 1 << 62
MAX_FACTOR_INPUT = (1 << 63) - 1

# Deterministic Miller-Rabin: the first 13 primes are exact witnesses for n < 3.3e24
# (the first 12 fail at 318665857834031151167461).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
_TRIAL_BOUND = 1000
_RHO_SEED = 0x5EED


def pow_mod(base: int, exp: int, p: int) -> int:
    """Return base**exp mod p, reducing a negative base into [0, p) first."""
    if p < 2:
        raise ValueError(f"modulus must be >= 2, got {p}")
    if exp < 0:
        raise ValueError(f"exponent must be nonnegative, got {exp}")
    return pow(base % p, exp, p)


def inverse_mod(a: int, p: int) -> int:
    return pow(a % p, -1, p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int, rng: random.Random) -> int:
    """Brent's variant of Pollard rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n as {prime: exponent}, keys ascending.

    Trial division up to a small bound, then seeded Pollard rho on the cofactor,
    so the output (and the work done) is the same on every call.

    >>> factorize(12)
    {2: 2, 3: 1}
    >>> factorize(2**32 + 1)
    {641: 1, 6700417: 1}
    """
    if n < 2:
        raise ValueError(f"factorize needs n >= 2, got {n}")
    if n > MAX_FACTOR_INPUT:
        raise ValueError(f"factorize is limited to 63-bit inputs, got {n}")
    out: dict[int, int] = {}
    for q in range(2, _TRIAL_BOUND):
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out[q] = e
    if n > 1:
        rng = random.Random(_RHO_SEED ^ n)
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            f = _rho(m, rng)
            stack.extend((f, m // f))
    return dict(sorted(out.items()))


def mult_order(a: int, p: int, fac: dict[int, int] | None = None) -> int:
    """Multiplicative order of a mod prime p.

    Starts from p - 1 and strips each prime factor while the power stays 1.
    `fac` is the factorization of p - 1; it is computed when omitted.
    """
    a %= p
    if a == 0:
        raise ValueError(f"{p} divides the base; order undefined")
    if fac is None:
        fac = factorize(p - 1) if p > 2 else {}
    e = p - 1
    for q, k in fac.items():
        for _ in range(k):
            if pow(a, e // q, p) == 1:
                e //= q
            else:
                break
    return e


def discrete_log(a: int, b: int, p: int, ord_a: int | None = None) -> int | None:
    """Least l >= 0 with a**l == b (mod p), or None when b is not in <a>.

    Baby-step giant-step over the cyclic subgroup of order ord_a.
    """
    a %= p
    b %= p
    if a == 0 or b == 0:
        raise ValueError(f"{p} divides an argument; discrete log undefined")
    if ord_a is None:
        ord_a = mult_order(a, p)
    elif pow(a, ord_a, p) != 1:
        raise ValueError(f"{ord_a} is not a multiple of ord_{p}({a})")
    # <a> is the unique subgroup of order ord_a in the cyclic group mod p
    if pow(b, ord_a, p) != 1:
        return None
    if b == 1:
        return 0
    step = isqrt(ord_a - 1) + 1
    table: dict[int, int] = {}
    cur = 1
    for j in range(step):
        table.setdefault(cur, j)
        cur = cur * a % p
    giant = pow(a, ord_a - step % ord_a, p) if step % ord_a else 1
    cur = b
    for i in range(step + 1):
        j = table.get(cur)
        if j is not None:
            return (i * step + j) % ord_a
        cur = cur * giant % p
    return None


def is_kth_power_residue(a: int, k: int, p: int) -> bool:
    """True iff x**k == a (mod p) is solvable, for p not dividing a."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if a % p == 0:
        raise ValueError(f"{p} divides {a}; residue test undefined")
    return pow(a % p, (p - 1) // gcd(k, p - 1), p) == 1


def q_of_ell(ell: int, h: int) -> int:
    """Smallest power ell**alpha (alpha >= 1) that does not divide 2h."""
    q = ell
    while (2 * h) % q == 0:
        q *= ell
    return q


def perfect_power_order(n: int) -> int:
    """Largest k with |n| a perfect k-th power of an integer; 1 for |n| <= 1."""
    n = abs(n)
    if n <= 1:
        return 1
    g = 0
    for e in factorize(n).values():
        g = gcd(g, e)
    return g


def is_perfect_kth_power(n: int, k: int) -> bool:
    """n >= 0 is r^k for some integer r."""
    return bool(gmpy2.iroot(n, k)[1])


def euler_phi(n: int, fac: dict[int, int] | None = None) -> int:
    if n == 1:
        return 1
    if fac is None:
        fac = factorize(n)
    out = n
    for q in fac:
        out = out // q * (q - 1)
    return out


def mobius(n: int) -> int:
    if n == 1:
        return 1
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def num_divisors(n: int) -> int:
    out = 1
    if n > 1:
        for e in factorize(n).values():
            out *= e + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    if n > 1:
        for q, e in factorize(n).items():
            divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
