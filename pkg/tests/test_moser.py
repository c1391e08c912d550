from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msrecovery.moser import (
    COLLAPSE,
    CONFIRMED,
    SUSPECT,
    TRIVIAL,
    MoserPolynomial,
    check_recurrences,
    classify_root,
    find_integer_roots,
    format_table,
    integer_roots,
    modp_no_root_certificate,
    moser_polynomial,
    moser_value,
    odd_k_collapse_check,
    residue_roots,
    scan_table,
    strip_roots,
)
from msrecovery.polynomial import IntPolynomial

n_poly = lambda *c: IntPolynomial(reversed(c))  # noqa: E731  (highest degree first)


def prod_range(lo, hi):
    """prod_{p=lo..hi} (n - p); empty product is 1."""
    return IntPolynomial.from_roots(range(lo, hi + 1))


def scaled(s, k):
    return moser_polynomial(s, k).G


# definition and general shape


@given(st.integers(1, 14), st.integers(1, 30), st.integers(-40, 200))
def test_polynomial_matches_defining_sum(s, k, n):
    P = moser_polynomial(s, k)
    assert P.value(n) == moser_value(s, k, n)


@pytest.mark.parametrize("s", range(1, 16))
def test_monic_of_degree_s_minus_1(s):
    G = scaled(s, 7)
    assert G.degree == s - 1 and G.is_monic()


def test_negative_s_is_zero():
    assert moser_value(0, 3, 10) == 0
    assert moser_value(-2, 3, 10) == 0


@given(st.integers(1, 12), st.integers(2, 60))
def test_k2_is_binomial(s, n):
    assert moser_value(s, 2, n) == comb(n - 2, s - 1)


# recurrences (exhaustive over the stated box, plus random rational points)


@pytest.mark.parametrize("s", range(2, 13))
def test_recurrences_exhaustive(s):
    assert all(check_recurrences(s, k) for k in range(2, 26))


@given(st.integers(2, 12), st.integers(2, 25), st.fractions(max_denominator=7).filter(lambda x: abs(x) < 100))
def test_recurrences_at_random_points(s, k, x):
    F = moser_value
    assert F(s, k, x) == F(s, k, x - 1) + F(s - 1, k, x - 1)
    assert F(s, k, x) == s * F(s, k - 1, x) - x * F(s - 1, k - 1, x - 1)


# printed factorizations for s = 3 and s = 4


@pytest.mark.parametrize(
    "k,roots",
    [(1, [1, 2]), (2, [2, 3]), (3, [3, 6]), (5, [6, 27]), (9, [27, 486])],
)
def test_s3_factorizations(k, roots):
    assert scaled(3, k) == IntPolynomial.from_roots(roots)


def test_s3_general_form():
    for k in range(1, 40):
        assert scaled(3, k) == n_poly(1, -(2**k + 1), 2 * 3 ** (k - 1))


@pytest.mark.parametrize(
    "k,factor",
    [
        (1, prod_range(1, 3)),
        (2, prod_range(2, 4)),
        (3, IntPolynomial.from_roots([3, 4, 8])),
        (4, IntPolynomial.from_roots([4]) * n_poly(1, -23, 96)),
        (5, IntPolynomial.from_roots([8]) * n_poly(1, -43, 192)),
        (6, IntPolynomial.from_roots([12]) * n_poly(1, -87, 512)),
        (7, IntPolynomial.from_roots([8]) * n_poly(1, -187, 3072)),
    ],
)
def test_s4_factorizations(k, factor):
    assert scaled(4, k) == factor


def test_s4_general_form():
    # expanding 6 * (C(n,3) - 2^(k-1) C(n,2) + 3^(k-1) n - 4^(k-1)) gives 3 + 3*2^(k-1) for n^2;
    # the k = 1 case (n-1)(n-2)(n-3) pins it down
    for k in range(1, 30):
        G = n_poly(1, -(3 + 3 * 2 ** (k - 1)), 2 + 3 * 2 ** (k - 1) + 2 * 3**k, -6 * 4 ** (k - 1))
        assert scaled(4, k) == G


# general forms for small k


@pytest.mark.parametrize("s", range(3, 25))
def test_small_k_general_forms(s):
    assert scaled(s, 1) == prod_range(1, s - 1)
    assert scaled(s, 2) == prod_range(2, s)
    assert scaled(s, 3) == IntPolynomial.from_roots([2 * s]) * prod_range(3, s)
    assert scaled(s, 4) == n_poly(1, -(6 * s - 1), 6 * s * s) * prod_range(4, s)
    if s > 3:
        quad = n_poly(1, -(12 * s - 5), 12 * s * s)
        assert scaled(s, 5) == quad * IntPolynomial.from_roots([2 * s]) * prod_range(5, s)


def g6(s):
    return n_poly(1, -(30 * s - 16), 150 * s * s - 90 * s + 11, -(240 * s**3 - 90 * s * s + 4), 120 * s**4)


@pytest.mark.parametrize("s", range(5, 31))
def test_k6_general_form(s):
    assert scaled(s, 6) == g6(s) * prod_range(6, s)


@pytest.mark.parametrize(
    "s,root,cubic",
    [
        (8, 12, (1, -212, 6347, -40960)),
        (10, 32, (1, -252, 6047, -37500)),
        (22, 32, (1, -612, 51047, -878460)),
        (30, 32, (1, -852, 105047, -3037500)),
    ],
)
def test_g6_factorizations(s, root, cubic):
    assert g6(s) == IntPolynomial.from_roots([root]) * n_poly(*cubic)


# s = 5


QUARTICS = {
    6: (1, -134, 3311, -27754, 75000),
    7: (1, -262, 9527, -107570, 375000),
    8: (1, -518, 27791, -420490, 1875000),
    9: (1, -1030, 81815, -1653650, 9375000),
}


@pytest.mark.parametrize("k", sorted(QUARTICS))
def test_s5_quartics(k):
    assert scaled(5, k) == n_poly(*QUARTICS[k])


def test_s5_k6_sign_changes():
    assert [moser_value(5, 6, x) for x in (6, 7, 8, 15, 16, 104, 105)] == [1, -25, 15, 85, -199, -31065, 3895]


def test_s5_cofactors():
    assert strip_roots(scaled(5, 7), [10]) == n_poly(1, -252, 7007, -37500)
    assert strip_roots(scaled(5, 9), [10]) == n_poly(1, -1020, 71615, -937500)
    with pytest.raises(ArithmeticError):
        strip_roots(scaled(5, 6), [10])


@pytest.mark.parametrize(
    "k,strip,p",
    [(6, [], 13), (8, [], 13), (7, [10], 23), (9, [10], 13)],
)
def test_certificates(k, strip, p):
    ok, roots = modp_no_root_certificate(strip_roots(scaled(5, k), strip), p)
    assert ok and roots == []


def test_failed_certificate_lists_roots():
    ok, roots = modp_no_root_certificate(moser_polynomial(3, 5), 13)
    assert not ok and roots == [1, 6]
    with pytest.raises(ValueError):
        modp_no_root_certificate(moser_polynomial(3, 5), 12)


# properties


@pytest.mark.parametrize("s", range(2, 13))
def test_divisibility_by_trailing_product(s):
    for k in range(2, s + 1):
        assert prod_range(k, s).divides(scaled(s, k))


@given(st.integers(2, 40), st.data())
def test_duality(n, data):
    k = data.draw(st.integers(2, n))
    s = data.draw(st.integers(0, n))
    assert moser_value(s, k, n) == (-1) ** k * moser_value(n - s, k, n)


@pytest.mark.parametrize("s", range(3, 21))
def test_odd_k_vanishes_at_2s(s):
    assert odd_k_collapse_check(s)


# root finding


def test_residue_roots():
    G = scaled(3, 9)
    for p in (13, 1009):
        assert residue_roots(G, p) == [r for r in range(p) if G.eval_mod(r, p) == 0]


@given(st.lists(st.integers(1, 5000), min_size=1, max_size=4, unique=True), st.integers(-3, 3))
def test_find_integer_roots_planted(roots, c):
    poly = IntPolynomial.from_roots(roots) * n_poly(1, 0, 7 + c * c)  # second factor has no real roots
    assert find_integer_roots(poly, 5000) == sorted(roots)


def test_find_integer_roots_edge_cases():
    poly = IntPolynomial.from_roots([3, 40])
    with pytest.warns(RuntimeWarning):
        assert find_integer_roots(poly, 100, primes=()) == [3, 40]
    with pytest.raises(ValueError):
        find_integer_roots(poly * 1009, 100)
    with pytest.raises(ValueError):
        find_integer_roots(IntPolynomial(), 100)


def test_integer_roots_classified():
    recs = integer_roots(moser_polynomial(3, 9), 10**6)
    assert [(r.n, r.classification) for r in recs] == [(27, CONFIRMED), (486, CONFIRMED)]
    assert recs[0].to_json() == {"s": 3, "k_first": 9, "n": 27, "classification": CONFIRMED}
    with pytest.raises(ValueError):
        integer_roots(moser_polynomial(5, 6), 4)
    with pytest.raises(TypeError):
        integer_roots(moser_polynomial(5, 6).G)


def test_classify():
    assert classify_root(5, 5) == TRIVIAL
    assert classify_root(5, 10) == COLLAPSE
    assert classify_root(6, 27) == SUSPECT
    assert classify_root(6, 8) == CONFIRMED  # dual of (8, 2)
    assert classify_root(4, 12) == CONFIRMED


def test_scan_table_small():
    rows = scan_table(3, 4, None)
    assert [(r.s, r.n, r.k) for r in rows] == [(3, 27, 5), (3, 486, 9), (4, 12, 6)]
    assert format_table(rows) == "3 | 27[5], 486[9]\n4 | 12[6]"
    assert scan_table(3, 4, 40, workers=2) == scan_table(3, 4, 40)


def test_moser_polynomial_str():
    P = moser_polynomial(3, 9)
    assert isinstance(P, MoserPolynomial) and P.scale == factorial(2)
    assert str(P) == "2*F[3,9](n) = n^2 - 513*n + 13122"
    assert P.value(27) == Fraction(0)
