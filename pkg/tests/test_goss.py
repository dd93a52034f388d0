"""Goss polynomials: recurrence, identities, and brute-force oracles."""

import itertools

import pytest

from heckeft.budgets import Budget
from heckeft.errors import BudgetExceededError, HeckeftError
from heckeft.fq import FqContext
from heckeft.goss import (ExpCoeffs, FiniteLattice, XPoly,
                          brute_force_power_sum, finite_lattice_exponential,
                          goss_for_finite_lattice, goss_polynomials,
                          int_times, lattice_log, power_sum_matches_goss,
                          rescale_lattice_goss, ring_pow)
from heckeft.polyring import PolyA, RationalFunction


def one_rf(ctx):
    return RationalFunction.one(ctx)


def rf(ctx, text):
    return RationalFunction.from_poly(PolyA.parse(ctx, text))


# -- recurrence basics ---------------------------------------------------------

@pytest.mark.parametrize("q", [2, 3, 4])
def test_small_indices_are_powers(q):
    p = 2 if q in (2, 4) else 3
    tab = goss_polynomials(ExpCoeffs.generic(q, p, 3), q + 2)
    for k in range(1, q + 1):
        assert tab[k] == XPoly.monomial(tab.coeffs.one, k)


def test_one_dim_lattice_g3(F2):
    # L = F_2 * lam has alpha_1 = lam^{-1}; at lam = 1: G_3 = X^3 + X^2
    lat = FiniteLattice(F2, [one_rf(F2)])
    tab = goss_for_finite_lattice(lat, 3)
    one = one_rf(F2)
    assert tab[3] == XPoly({3: one, 2: one})


def test_generic_g4_q3():
    gen = ExpCoeffs.generic(3, 3, 2)
    tab = goss_polynomials(gen, 4)
    a1 = gen.alpha(1)
    assert tab[4] == XPoly({4: gen.one, 2: a1})


def test_formula_2q_minus_2(F3):
    # one-dimensional lattice: G_{2q-2} = X^{2q-2} - 2 alpha X^{q-1}
    q = 3
    lam = rf(F3, "t")
    lat = FiniteLattice(F3, [lam])
    tab = goss_for_finite_lattice(lat, 2 * q - 2)
    alpha = -(lam ** (1 - q))
    minus2alpha = -(alpha + alpha)
    assert tab[2 * q - 2] == XPoly({2 * q - 2: one_rf(F3), q - 1: minus2alpha})


def test_char2_2q_minus_2_collapses(F2):
    lat = FiniteLattice(F2, [rf(F2, "t")])
    tab = goss_for_finite_lattice(lat, 2)
    assert tab[2] == XPoly.monomial(one_rf(F2), 2)


# -- the property block for generic tables --------------------------------------

@pytest.mark.parametrize("q,p", [(2, 2), (3, 3), (4, 2)])
def test_generic_property_block(q, p):
    K = q ** 3
    nvars = 1
    while q ** nvars < K:
        nvars += 1
    gen = ExpCoeffs.generic(q, p, nvars)
    tab = goss_polynomials(gen, K + 1)
    one = gen.one
    for k in range(1, K + 1):
        G = tab[k]
        assert G.degree == k and G.coeffs[k] == one, k
        assert 0 not in G.coeffs, k
        if k >= 2:
            assert 1 not in G.coeffs, k
        if k <= q:
            assert set(G.coeffs) == {k}
        for e in G.coeffs:
            assert (e - k) % (q - 1) == 0, (k, e)
        if p * k <= K + 1:
            assert tab[p * k] == ring_pow(G, p), k
        if k < K:
            lhs = G.derivative().shift(2)
            rhs = XPoly({e: int_times(c, k) for e, c in tab[k + 1].coeffs.items()})
            assert lhs == rhs, k


@pytest.mark.parametrize("q,p", [(2, 2), (3, 3), (4, 2)])
def test_part10_log_identity(q, p):
    gen = ExpCoeffs.generic(q, p, 5)
    tab = goss_polynomials(gen, q ** 3)
    withlog = lattice_log(gen, 4)
    for m in (1, 2, 3):
        k = q ** m - 1
        want = XPoly({q ** m - q ** i: withlog.beta(i) for i in range(m)})
        assert tab[k] == want, m


def test_log_composition_inverse(F3):
    # beta from a concrete lattice: e(log(X)) = X modulo X^(q^K)
    lat = FiniteLattice(F3, [one_rf(F3), rf(F3, "t")])
    coeffs = lattice_log(finite_lattice_exponential(lat), 3)
    q = 3
    # compose e after log on q-power coefficients: sum_{i+j=m} a_i b_j^(q^i) = 0
    for m in range(1, 4):
        acc = None
        for i in range(m + 1):
            term = coeffs.alpha(i) * ring_pow(coeffs.beta(m - i), q ** i)
            acc = term if acc is None else acc + term
        assert not acc, m


def test_log_example_char2(F2):
    gen = ExpCoeffs(2, one_rf(F2), [rf(F2, "t")])  # e = X + t X^2
    withlog = lattice_log(gen, 2)
    assert withlog.beta(1) == rf(F2, "t")


# -- exponentials of finite lattices --------------------------------------------

def test_exponential_singleton(F2):
    lam = rf(F2, "t")
    lat = FiniteLattice(F2, [lam])
    coeffs = finite_lattice_exponential(lat)
    assert coeffs.alpha(1) == lam.inv()  # X + (1/lam) X^2 in char 2
    assert coeffs.alpha(2) == coeffs.zero


def test_exponential_two_dim_span(F2):
    lat = FiniteLattice(F2, [one_rf(F2), rf(F2, "t")])
    coeffs = finite_lattice_exponential(lat)
    assert coeffs.alpha(1) == rf(F2, "t^2+t+1") / rf(F2, "t^2+t")
    assert coeffs.alpha(2) == one_rf(F2) / rf(F2, "t^2+t")


def test_exponential_vanishes_on_lattice(F3):
    lat = FiniteLattice(F3, [one_rf(F3), rf(F3, "t+1")])
    coeffs = finite_lattice_exponential(lat)
    poly = coeffs.exponential_poly()
    for lam in lat.elements(nonzero=True):
        assert not poly.evaluate(lam)


def test_dependent_basis_rejected(F2):
    with pytest.raises(HeckeftError):
        FiniteLattice(F2, [one_rf(F2), one_rf(F2)])


def test_lattice_budget(F3):
    with pytest.raises(BudgetExceededError):
        FiniteLattice(F3, [rf(F3, "t^%d" % i) for i in range(5)],
                      Budget(lattice_points=4))


# -- brute-force oracles ---------------------------------------------------------

def test_power_sum_zero_lattice_shape(F2):
    lat = FiniteLattice(F2, [one_rf(F2)])
    num, den = brute_force_power_sum(lat, 1)
    # sum over {0,1} of (z+lam)^{-1} = (z + (z+1)) / (z(z+1)) = 1/(z^2+z)
    assert num == XPoly({0: one_rf(F2)}, "z")
    assert den == XPoly({2: one_rf(F2), 1: one_rf(F2)}, "z")


def test_power_sum_equals_inverse_exponential(F3):
    # k = 1: the sum is exactly 1/e_L(z)
    lat = FiniteLattice(F3, [rf(F3, "t")])
    num, den = brute_force_power_sum(lat, 1)
    coeffs = finite_lattice_exponential(lat)
    e_poly = coeffs.exponential_poly()
    e_poly = XPoly(dict(e_poly.coeffs), "z")
    # num/den == 1/e  <=>  num * e == den
    assert num * e_poly == den


def test_power_sum_matches_goss_composition_small(F2):
    # num/den = sum_j c_{k,j} e^{-j}  <=>  num * e^k = (sum_j c_{k,j} e^{k-j}) * den
    lat = FiniteLattice(F2, [rf(F2, "t")])
    k = 3
    num, den = brute_force_power_sum(lat, k)
    tab = goss_for_finite_lattice(lat, k)
    coeffs = finite_lattice_exponential(lat)
    e_poly = XPoly(dict(coeffs.exponential_poly().coeffs), "z")
    total = None
    for j, c in tab[k].coeffs.items():
        term = ring_pow(e_poly, k - j) if k - j > 0 else XPoly({0: one_rf(F2)}, "z")
        term = term.scalar(c)
        total = term if total is None else total + term
    assert num * ring_pow(e_poly, k) == total * den


@pytest.mark.parametrize("q", [2, 3, 4])
def test_packed_oracle_selected_lattices(q):
    ctx = FqContext(*__import__("heckeft.fq", fromlist=["factor_prime_power"]).factor_prime_power(q))
    t = PolyA.t(ctx)
    one = PolyA.one(ctx)
    assert power_sum_matches_goss(ctx, [one], 8) == []
    assert power_sum_matches_goss(ctx, [t], 6) == []
    assert power_sum_matches_goss(ctx, [one, t], 6) == []


def test_divisibility_floor(F2, F3):
    for ctx, q in ((F2, 2), (F3, 3)):
        lat = FiniteLattice(ctx, [RationalFunction.one(ctx),
                                  rf(ctx, "t")])
        K = 12
        tab = goss_for_finite_lattice(lat, K)
        for k in range(1, K + 1):
            floor = k // q ** 2 + 1
            assert tab[k].order() >= floor, k


# -- rescaling -------------------------------------------------------------------

def test_rescale_identity(F2):
    lat = FiniteLattice(F2, [rf(F2, "t")])
    tab = goss_for_finite_lattice(lat, 5)
    same = rescale_lattice_goss(lat, one_rf(F2), tab)
    assert all(same[k] == tab[k] for k in range(1, 6))


def test_rescale_example(F2):
    # scaling F_2*t by t^{-1} gives F_2*1, whose G_3 is X^3 + X^2
    lat = FiniteLattice(F2, [rf(F2, "t")])
    tab = goss_for_finite_lattice(lat, 3)
    resc = rescale_lattice_goss(lat, rf(F2, "t").inv(), tab)
    one = one_rf(F2)
    assert resc[3] == XPoly({3: one, 2: one})


def test_rescale_matches_recomputation(F3, rng):
    lat = FiniteLattice(F3, [one_rf(F3), rf(F3, "t")])
    tab = goss_for_finite_lattice(lat, 7)
    for ctext in ("t", "t+1", "t^2+2"):
        c = rf(F3, ctext)
        resc = rescale_lattice_goss(lat, c, tab)
        direct = goss_for_finite_lattice(lat.scaled(c), 7)
        for k in range(1, 8):
            assert resc[k] == direct[k], (ctext, k)
            # degree and monicity preserved
            assert resc[k].degree == k
            assert resc[k].coeffs[k] == one_rf(F3)


def test_zero_lattice_table(F2):
    coeffs = ExpCoeffs(2, one_rf(F2), [])
    tab = goss_polynomials(coeffs, 6)
    for k in range(1, 7):
        assert tab[k] == XPoly.monomial(one_rf(F2), k)
