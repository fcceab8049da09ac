import io
from math import gcd

import pytest

from shiftexp.modarith import is_kth_power_residue, mult_order
from shiftexp.primeset import (
    CSV_HEADER,
    Mode,
    Params,
    ParamsError,
    PrimeRecord,
    complete_record,
    count_S,
    in_S,
    in_S_mdr,
    in_S_mdr_direct,
    in_S_prime_mdr,
    in_T_m,
    make_params,
    make_record,
    read_records_csv,
    records_to_csv,
    s_records,
    stream_records,
)
from shiftexp.sieve import simple_sieve


def brute_in_S(p, a, b, h):
    """Unfold the definition with brute-force power sets."""
    if p % (4 * abs(a * b) * h) != 1:
        return False
    k = 2 * h
    kth = {pow(x, k, p) for x in range(1, p)}
    o = 1
    while pow(a, o, p) != 1:
        o += 1
    return a % p in kth and b % p in kth and o == (p - 1) // k


def test_make_params_all():
    p = make_params(2, -5)
    assert (p.h, p.h_a, p.h_b, p.modulus) == (1, 1, 1, 40)
    p = make_params(2, 9)
    assert (p.h, p.h_b, p.modulus) == (2, 2, 144)
    with pytest.raises(ParamsError):
        make_params(4, 3)
    with pytest.raises(ParamsError):
        make_params(6, 3)
    with pytest.raises(ParamsError):
        make_params(1, 3)
    with pytest.raises(ParamsError):
        make_params(2, 0)


def test_make_params_prime_mode():
    p = make_params(4, 27, Mode.PRIME_EXPONENTS, w=11)
    assert (p.h_a, p.h_b, p.h) == (2, 3, 6)
    assert p.W == 5 * 7 * 11
    with pytest.raises(ParamsError):
        make_params(2, 1, "prime")


def test_in_S_brute_oracle():
    for a, b in ((2, -5), (2, 3), (3, 2), (2, 9)):
        params = make_params(a, b)
        for p in simple_sieve(30_000).tolist():
            if (2 * a * b) % p == 0:
                continue
            assert in_S(p, params) == brute_in_S(p, a, b, params.h), (a, b, p)


def test_first_S_primes(records_1e6, s_records_1e6):
    assert len(records_1e6) == 78498
    assert len(s_records_1e6) == 1593
    assert s_records_1e6[:3] == [
        PrimeRecord(41, 20, 17, True),
        PrimeRecord(401, 200, 148, True),
        PrimeRecord(521, 260, 104, True),
    ]


def test_records_are_consistent(params25, s_records_1e6):
    for r in s_records_1e6:
        assert r.ord == (r.p - 1) // 2 == mult_order(2, r.p)
        assert r.ell is not None and pow(2, r.ell, r.p) == (-5) % r.p


def test_prefilter_leaves_fields_empty(params25):
    assert make_record(43, params25) == PrimeRecord(43)
    assert make_record(5, params25) == PrimeRecord(5)
    full = complete_record(make_record(43, params25), params25)
    assert full.ord == mult_order(2, 43) and not full.in_S


def test_prime_divisor_of_2ab_rejected(params25):
    for p in (2, 5):
        with pytest.raises(ValueError):
            in_S(p, params25)


def test_stream_window_and_workers(params25, records_1e6):
    window = list(stream_records(params25, 10**6, lo=500_000, hi=600_000))
    assert window == [r for r in records_1e6 if 500_000 <= r.p < 600_000]
    par = list(stream_records(params25, 200_000, workers=2))
    assert par == [r for r in records_1e6 if r.p <= 200_000]
    with pytest.raises(ValueError):
        next(stream_records(params25, 10**9 + 1))


def test_count_S(params25, s_records_1e6):
    assert count_S(params25, 10**6) == (len(s_records_1e6), 78498)
    assert s_records(params25, 10**5) == [r for r in s_records_1e6 if r.p <= 10**5]


def test_S_mdr_two_routes_agree(params25, s_records_1e6):
    # the residue criterion must match reading l(p) mod m directly
    for m, d in ((20, 1), (20, 2), (40, 1), (1, 1)):
        for r in range(m):
            for rec in s_records_1e6[:300]:
                assert in_S_mdr(rec.p, m, d, r, params25) == in_S_mdr_direct(rec.p, m, d, r, params25)


def test_S_mdr_partitions_S(params25, s_records_1e6):
    m = 20
    for rec in s_records_1e6[:200]:
        hits = [r for r in range(m) if in_S_mdr_direct(rec.p, m, 1, r, params25)]
        assert hits == ([rec.ell % m] if rec.ord % m == 0 else [])


def test_S_prime_contains_S_mdr(params25, s_records_1e6):
    for rec in s_records_1e6[:200]:
        for r in range(20):
            if in_S_mdr(rec.p, 20, 1, r, params25):
                assert in_S_prime_mdr(rec.p, 20, 1, r, params25)


def test_T_m():
    params = make_params(2, -5)
    assert in_T_m(41, 1, params)
    # ord_41(2) = 20 = 40/2, so 2 is a square but not a 4th or 10th power residue
    assert in_T_m(41, 2, params) and in_T_m(41, 5, params)
    assert not in_T_m(43, 2, params)


def test_prime_mode_membership():
    params = make_params(2, -5, Mode.PRIME_EXPONENTS, w=3)
    assert params.W == 3
    for p in simple_sieve(20_000).tolist():
        if p in (2, 5):
            continue
        expect = p % 40 == 1 and p % 3 == 2 and mult_order(2, p) == mult_order(5 * -1, p) == (p - 1) // 2
        assert in_S(p, params) == expect


def test_csv_roundtrip(records_1e6):
    sample = records_1e6[:2000]
    text = records_to_csv(sample)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert read_records_csv(io.StringIO(text)) == sample
    assert read_records_csv(io.StringIO("")) == []
    with pytest.raises(ValueError):
        read_records_csv(io.StringIO("p,ord,in_S\n2,,0\n"))


def test_params_hashable():
    assert {make_params(2, -5), make_params(2, -5)} == {Params(2, -5, 1)}


def test_residue_equivalence_all_S_primes(params25, s_records_1e6):
    # for md | ord: l(p) = r (mod m)  <=>  b a^-r is a 2hm-th power residue
    for rec in s_records_1e6:
        for m, d in ((20, 1), (20, 2), (40, 1), (10, 1)):
            if rec.ord % (m * d):
                continue
            ainv = pow(2, -1, rec.p)
            for r in range(m):
                residue = is_kth_power_residue(-5 * pow(ainv, r, rec.p), 2 * m, rec.p)
                assert residue == ((rec.ell - r) % m == 0)


def test_prime_mode_ell_coprime_to_ord():
    params = make_params(2, -5, Mode.PRIME_EXPONENTS, w=3)
    recs = [r for r in stream_records(params, 10**6) if r.in_S]
    assert recs
    assert all(gcd(r.ell, r.ord) == 1 for r in recs)


def test_density_stabilizes(params25):
    h1, t1 = count_S(params25, 5 * 10**5)
    h2, t2 = count_S(params25, 10**6)
    assert abs(h2 / t2 - h1 / t1) < 0.002
