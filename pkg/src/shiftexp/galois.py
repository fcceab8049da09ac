"""The triple group modelling Gal(Q(zeta_m, a^(1/m'), b^(1/m'))/Q).

An automorphism sigma corresponds to (X, Y, Z) with sigma(zeta_m) = zeta_m^X,
sigma(a^(1/m')) = zeta_m'^Y a^(1/m') and sigma(b^(1/m')) = zeta_m'^Z b^(1/m').
We work with the full group H of all such triples, of order phi(m) m'^2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd

import numpy as np

from .modarith import euler_phi, factorize, is_prime

ENUMERATION_BUDGET = 10**7


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TripleElement:
    X: int
    Y: int
    Z: int
    m: int
    mp: int

    def __post_init__(self):
        if self.m < 1 or self.mp < 1 or self.m % self.mp:
            raise ValueError(f"need m' | m, got m = {self.m}, m' = {self.mp}")
        if not (0 <= self.X < self.m and 0 <= self.Y < self.mp and 0 <= self.Z < self.mp):
            raise ValueError(f"triple {self.X, self.Y, self.Z} not in canonical range")
        if gcd(self.X, self.m) != 1:
            raise ValueError(f"X = {self.X} is not a unit mod {self.m}")

    @classmethod
    def of(cls, X: int, Y: int, Z: int, m: int, mp: int) -> "TripleElement":
        return cls(X % m, Y % mp, Z % mp, m, mp)

    @property
    def code(self) -> int:
        return encode(self.X, self.Y, self.Z, self.mp)

    def astuple(self) -> tuple[int, int, int]:
        return (self.X, self.Y, self.Z)


def encode(X: int, Y: int, Z: int, mp: int) -> int:
    return (X * mp + Y) * mp + Z


def decode(code: int, m: int, mp: int) -> TripleElement:
    rest, Z = divmod(int(code), mp)
    X, Y = divmod(rest, mp)
    return TripleElement(X, Y, Z, m, mp)


def identity(m: int, mp: int) -> TripleElement:
    return TripleElement.of(1, 0, 0, m, mp)


def star(u: TripleElement, v: TripleElement) -> TripleElement:
    """(X, Y, Z) * (A, B, C) = (AX, Y + BX, Z + CX)."""
    if (u.m, u.mp) != (v.m, v.mp):
        raise ValueError(f"context mismatch: {(u.m, u.mp)} vs {(v.m, v.mp)}")
    m, mp = u.m, u.mp
    return TripleElement.of(v.X * u.X, u.Y + v.Y * u.X, u.Z + v.Z * u.X, m, mp)


def inverse(u: TripleElement) -> TripleElement:
    m, mp = u.m, u.mp
    xi = pow(u.X, -1, m) if m > 1 else 0
    return TripleElement.of(xi, -u.Y * xi, -u.Z * xi, m, mp)


def units(m: int) -> list[int]:
    return [x for x in range(m) if gcd(x, m) == 1] if m > 1 else [0]


def group_order(m: int, mp: int) -> int:
    return euler_phi(m) * mp * mp


def elements(m: int, mp: int):
    for X in units(m):
        for Y in range(mp):
            for Z in range(mp):
                yield TripleElement(X, Y, Z, m, mp)


@dataclass(frozen=True)
class ConjClass:
    rep: TripleElement
    members: np.ndarray  # sorted canonical encodings, read-only

    @property
    def size(self) -> int:
        return int(self.members.size)

    def contains(self, u: TripleElement) -> bool:
        i = np.searchsorted(self.members, u.code)
        return i < self.members.size and int(self.members[i]) == u.code

    def triples(self) -> list[TripleElement]:
        return [decode(c, self.rep.m, self.rep.mp) for c in self.members]


def _check_context(m: int, mp: int) -> None:
    if m < 1 or mp < 1 or m % mp:
        raise ValueError(f"need m' | m, got m = {m}, m' = {mp}")
    if group_order(m, mp) > ENUMERATION_BUDGET:
        raise BudgetExceeded(f"|H| = phi({m}) * {mp}^2 exceeds the budget {ENUMERATION_BUDGET}")


def _class_codes(A: int, B: int, C: int, m: int, mp: int) -> np.ndarray:
    """Codes of (A, BX - (A-1)Y, CX - (A-1)Z) over all (X, Y, Z) in H."""
    xs = np.unique(np.array(units(m), dtype=np.int64) % mp)
    shifts = np.unique((A - 1) * np.arange(mp, dtype=np.int64) % mp)
    ys = (B * xs[:, None] - shifts[None, :]) % mp
    zs = (C * xs[:, None] - shifts[None, :]) % mp
    codes = (A * mp + ys[:, :, None]) * mp + zs[:, None, :]
    out = np.unique(codes.ravel())
    out.setflags(write=False)
    return out


def conjugacy_classes(m: int, mp: int) -> list[ConjClass]:
    """Partition H into conjugacy classes, ordered by their least element."""
    _check_context(m, mp)
    seen = np.zeros(m * mp * mp, dtype=bool)
    out = []
    for A in units(m):
        for B in range(mp):
            for C in range(mp):
                code = encode(A, B, C, mp)
                if seen[code]:
                    continue
                members = _class_codes(A, B, C, m, mp)
                seen[members] = True
                out.append(ConjClass(TripleElement(A, B, C, m, mp), members))
    return out


def _fixes_Kr(codes: np.ndarray, m: int, mp: int, r: int) -> np.ndarray:
    rest, Z = np.divmod(codes, mp)
    X, Y = np.divmod(rest, mp)
    return (X == 1 % m) & ((Z - r * Y) % mp == 0)


def classes_fixing_Kr(m: int, mp: int, r: int, classes: list[ConjClass] | None = None) -> list[ConjClass]:
    """Classes all of whose elements fix K_r = Q(zeta_m, (b a^-r)^(1/m')): X = 1, Z = rY."""
    if classes is None:
        classes = conjugacy_classes(m, mp)
    return [c for c in classes if _fixes_Kr(c.members, m, mp, r).all()]


def _avoids_Lq(codes: np.ndarray, mp: int) -> np.ndarray:
    # given X = 1, sigma fixes Q(zeta_q, a^(1/q)) iff q | Y
    Y = (codes // mp) % mp
    ok = np.ones(codes.shape, dtype=bool)
    for q in (factorize(mp) if mp > 1 else {}):
        ok &= Y % q != 0
    return ok


def disjoint_class_sets(m: int, mp: int, exclude_Lq: bool = True) -> list[list[ConjClass]]:
    classes = conjugacy_classes(m, mp)
    per_r = []
    for r in range(mp):
        fixing = classes_fixing_Kr(m, mp, r, classes)
        if exclude_Lq:
            fixing = [c for c in fixing if _avoids_Lq(c.members, mp).all()]
        per_r.append(fixing)
    return per_r


def verify_disjointness(m: int, mp: int, exclude_Lq: bool = True) -> bool:
    """True iff the class sets C_{r,i} are pairwise disjoint across r mod m'.

    With exclude_Lq=False the classes fixing some Q(zeta_q, a^(1/q)) are kept,
    which breaks disjointness (the identity fixes every K_r).
    """
    if mp > 1 and not is_prime(mp):
        raise ValueError(f"m' must be prime, got {mp}")
    seen: set[int] = set()
    for fixing in disjoint_class_sets(m, mp, exclude_Lq):
        reps = {int(c.members[0]) for c in fixing}
        if reps & seen:
            return False
        seen |= reps
    return True


def classes_to_json(classes: list[ConjClass]) -> str:
    return json.dumps([{"rep": list(c.rep.astuple()), "size": c.size} for c in classes])
