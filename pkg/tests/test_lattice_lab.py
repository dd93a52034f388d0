"""Hermite and Smith forms, A-indices, sublattice enumeration."""

import pytest

from heckeft.budgets import Budget
from heckeft.errors import (BudgetExceededError, NotSublatticeError,
                            SingularMatrixError)
from heckeft.hecke import divisor_chains
from heckeft.lattice import (IndexType, LatticeMatrix, a_index,
                             change_of_basis, elementary_divisors,
                             enumerate_hnf_with_det, enumerate_sublattices,
                             hermite_normal_form, random_gl)
from heckeft.polyring import PolyA


def M(ctx, rows):
    return LatticeMatrix.parse_rows(ctx, rows)


def test_hnf_identity(F2):
    eye = LatticeMatrix.identity(F2, 2)
    assert hermite_normal_form(eye) == eye


def test_hnf_row_reduction(F2):
    got = hermite_normal_form(M(F2, [["t", "1"], ["0", "1"]]))
    assert got == M(F2, [["t", "0"], ["0", "1"]])


def test_hnf_already_canonical(F2):
    m = M(F2, [["1", "1"], ["0", "t"]])
    assert hermite_normal_form(m) == m


def test_hnf_singular_rejected(F2):
    with pytest.raises(SingularMatrixError):
        hermite_normal_form(M(F2, [["t", "t"], ["t", "t"]]))


def test_hnf_left_invariance(F2, rng):
    for _ in range(100):
        m = _random_nonsingular(F2, rng, 2)
        h = hermite_normal_form(m)
        g = random_gl(F2, 2, rng)
        assert hermite_normal_form(g * m) == h
        assert hermite_normal_form(h) == h


def test_snf_examples(F2):
    t = PolyA.t(F2)
    assert elementary_divisors(M(F2, [["t^2", "0"], ["0", "t"]])) == \
        IndexType([t * t, t])
    assert elementary_divisors(M(F2, [["t", "1"], ["0", "t"]])) == \
        IndexType([t * t, PolyA.one(F2)])
    assert elementary_divisors(LatticeMatrix.identity(F2, 2)) == \
        IndexType.identity(F2, 2)


def test_snf_bi_invariance(F3, rng):
    for _ in range(100):
        m = _random_nonsingular(F3, rng, 2)
        d = elementary_divisors(m)
        g, h = random_gl(F3, 2, rng), random_gl(F3, 2, rng)
        assert elementary_divisors(g * m * h) == d


def test_divisor_chain_invariant_is_validated(F2):
    t = PolyA.t(F2)
    with pytest.raises(Exception):
        IndexType([t, t * t])  # broken chain


def test_a_index_examples(F2):
    t = PolyA.t(F2)
    one = PolyA.one(F2)
    eye = LatticeMatrix.identity(F2, 2)
    assert a_index(eye, LatticeMatrix.diagonal(F2, [t, one])) == \
        IndexType([t, one])
    assert a_index(LatticeMatrix.diagonal(F2, [t, one]),
                   LatticeMatrix.diagonal(F2, [t * t, t])) == IndexType([t, t])
    assert a_index(eye, eye) == IndexType.identity(F2, 2)


def test_a_index_rejects_non_sublattice(F2):
    t = PolyA.t(F2)
    eye = LatticeMatrix.identity(F2, 2)
    with pytest.raises(NotSublatticeError):
        a_index(LatticeMatrix.diagonal(F2, [t, t]), eye)


def test_a_index_chain_multiplicativity(F2, rng):
    for _ in range(60):
        l = _random_nonsingular(F2, rng, 2)
        m = _random_nonsingular(F2, rng, 2) * l
        n = _random_nonsingular(F2, rng, 2) * m
        assert a_index(l, n).det() == \
            (a_index(l, m).det() * a_index(m, n).det()).monic()


def test_enumerate_sublattices_examples(F2):
    t = PolyA.t(F2)
    one = PolyA.one(F2)
    got = enumerate_sublattices(F2, 2, IndexType([t, one]))
    assert len(got) == 3
    assert set(got) == {
        M(F2, [["t", "0"], ["0", "1"]]),
        M(F2, [["1", "0"], ["0", "t"]]),
        M(F2, [["1", "1"], ["0", "t"]]),
    }
    assert enumerate_sublattices(F2, 2, IndexType([t, t])) == \
        [LatticeMatrix.diagonal(F2, [t, t])]
    assert len(enumerate_sublattices(F2, 3, IndexType([t, one, one]))) == 7


def test_enumeration_is_deterministic(F3):
    t = PolyA.t(F3)
    one = PolyA.one(F3)
    a = enumerate_sublattices(F3, 2, IndexType([t * t, one]))
    b = enumerate_sublattices(F3, 2, IndexType([t * t, one]))
    assert a == b


@pytest.mark.parametrize("q", [2, 3])
def test_enumeration_completeness(q):
    from heckeft.fq import FqContext
    ctx = FqContext(q)
    t = PolyA.t(ctx)
    for det in [t * t, t ** 3, t * (t + PolyA.one(ctx)),
                (t + PolyA.one(ctx)) ** 2 * t]:
        if det.deg > 3:
            continue
        all_hnf = enumerate_hnf_with_det(ctx, 2, det)
        byidx = []
        for chain in divisor_chains(ctx, det, 2):
            byidx.extend(enumerate_sublattices(ctx, 2, chain))
        assert len(byidx) == len(set(byidx))
        assert set(byidx) == set(all_hnf)


def test_budget_exceeded_reports_attempt(F3):
    t = PolyA.t(F3)
    tiny = Budget(enumeration=2)
    with pytest.raises(BudgetExceededError) as err:
        enumerate_sublattices(F3, 3, IndexType([t ** 2, t, PolyA.one(F3)]), tiny)
    assert err.value.attempted > 2


def test_change_of_basis_solves(F2, rng):
    for _ in range(30):
        l = _random_nonsingular(F2, rng, 3)
        x = _random_nonsingular(F2, rng, 3)
        assert change_of_basis(l, x * l) == x


def test_matrix_json_roundtrip(F4):
    m = M(F4, [["(g+1)*t^2+g", "1"], ["0", "t"]])
    assert LatticeMatrix.from_json(F4, m.to_json()) == m
    idx = elementary_divisors(m)
    assert IndexType.from_json(F4, idx.to_json()) == idx


def _random_nonsingular(ctx, rng, r):
    while True:
        m = LatticeMatrix(ctx, [[PolyA.random(ctx, rng, 2) for _ in range(r)]
                                for _ in range(r)])
        if m.det():
            return m
