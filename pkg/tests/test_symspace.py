import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitlab.exactalg import InconsistencyError, Matrix, Polynomial, PrimeField, ShapeError, SingularMatrixError
from orbitlab.symspace import (
    CosetInvariant,
    coset_invariants,
    is_closed,
    normal_dim_formula,
    normal_space_dim,
    random_h,
    rep_nu_block,
    rep_xpk,
    tau,
)

A_VALUES = [Fraction(v) for v in (2, -2, 3, -3, 5)]


def unipotent_13():
    return Matrix.identity(3) + Matrix.from_entries(3, 3, {(0, 2): 1})


def test_tau_examples():
    assert tau(Matrix.identity(3), 1, 2) == Matrix.identity(3)
    assert tau(rep_xpk(1, 2, 1), 1, 2) == Matrix.diag([-1, -1, 1])
    assert tau(unipotent_13(), 1, 2) == Matrix.identity(3) + Matrix.from_entries(3, 3, {(0, 2): 2})


def test_tau_errors():
    with pytest.raises(SingularMatrixError):
        tau(Matrix.zeros(3, 3), 1, 2)
    with pytest.raises(ShapeError):
        tau(Matrix.identity(2), 1, 2)


def test_is_closed_examples():
    assert is_closed(Matrix.identity(3), 1, 2)
    assert not is_closed(unipotent_13(), 1, 2)


def test_rep_xpk_examples():
    assert rep_xpk(2, 3, 0) == Matrix.identity(5)
    assert rep_xpk(1, 2, 1) == Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        rep_xpk(2, 3, 3)
    with pytest.raises(ValueError):
        rep_xpk(3, 2, 0)


@pytest.mark.parametrize("p", range(0, 5))
def test_xpk_involutive_closed_spectrum(p):
    for q in (p, p + 1):
        if p + q == 0:
            continue
        for k in range(p + 1):
            x = rep_xpk(p, q, k)
            assert x @ x == Matrix.identity(p + q)
            assert is_closed(x, p, q)
            if p <= 3:
                assert coset_invariants(x, p, q) == CosetInvariant(k, 0, ())


@pytest.mark.parametrize("p", range(1, 5))
def test_normal_dim_formula_xpk(p):
    for q in (p, p + 1):
        for k in range(p + 1):
            assert normal_space_dim(rep_xpk(p, q, k), p, q) == 2 * k * k + 2 * (p - k) * (q - k)


def test_normal_dim_examples():
    assert normal_space_dim(Matrix.identity(3), 1, 2) == 4
    assert normal_space_dim(rep_xpk(1, 2, 1), 1, 2) == 2
    assert normal_space_dim(rep_xpk(2, 3, 1), 2, 3) == 6


def test_nu_block_example():
    g = rep_nu_block(1, 2, 0, [2])
    assert g == Matrix([[1, 0, 1], [0, 1, 0], [1, 0, 3]])
    chi = tau(g, 1, 2).charpoly()
    assert chi == Polynomial([1, -4, 1]) * Polynomial([-1, 1])
    assert coset_invariants(g, 1, 2) == CosetInvariant(0, 1, (Fraction(2),))


def test_nu_block_empty_is_xpk():
    assert rep_nu_block(2, 3, 1, []) == rep_xpk(2, 3, 1)


def test_nu_block_errors():
    for bad in (1, -1):
        with pytest.raises(ValueError):
            rep_nu_block(1, 2, 0, [bad])
    with pytest.raises(ValueError):
        rep_nu_block(1, 2, 1, [2])
    with pytest.raises(ValueError):
        rep_nu_block(1, 2, 0, [2], PrimeField(2))


def test_block_determinant_is_two():
    for a in A_VALUES:
        g = rep_nu_block(1, 1, 0, [a])
        assert g.det() == 2


@pytest.mark.parametrize("p", range(1, 4))
def test_nu_block_round_trip(p):
    rng = random.Random(p)
    for q in (p, p + 1):
        for k in range(p + 1):
            for nu in range(p - k + 1):
                a = [rng.choice(A_VALUES) for _ in range(nu)]
                g = rep_nu_block(p, q, k, a)
                assert is_closed(g, p, q)
                assert coset_invariants(g, p, q) == CosetInvariant(k, nu, tuple(sorted(a)))
                assert normal_space_dim(g, p, q) == normal_dim_formula(p, q, k, a)


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4)
                .filter(lambda a: a * a != 1), min_size=1, max_size=2))
@settings(max_examples=30, deadline=None)
def test_nu_block_round_trip_random_rationals(a):
    p, q = 2, 3
    g = rep_nu_block(p, q, 0, a)
    assert coset_invariants(g, p, q) == CosetInvariant(0, len(a), tuple(sorted(a)))


def test_nu_block_prime_field():
    F = PrimeField(7)
    g = rep_nu_block(2, 2, 0, [3], F)
    inv = coset_invariants(g, 2, 2)
    assert (inv.k, inv.nu, inv.a_values) == (0, 1, (F(3),))


def test_non_closed_rejected():
    with pytest.raises(ValueError):
        coset_invariants(unipotent_13(), 1, 2)


def test_irrational_quadratic_is_inconsistency():
    # closed, but tau(g) has t^4 - 8/25 t^3 + 6/5 t^2 - 8/25 t + 1 with irrational a-values
    g = Matrix([[-1, 0, -2, -1], [2, -1, -1, -1], [2, 1, -2, -2], [0, 2, 1, -2]])
    assert is_closed(g, 2, 2)
    with pytest.raises(InconsistencyError):
        coset_invariants(g, 2, 2)


@pytest.mark.parametrize("p", range(1, 4))
def test_bi_invariance(p):
    q = p + 1
    rng = random.Random(100 + p)
    reps = [rep_xpk(p, q, k) for k in range(p + 1)] + [rep_nu_block(p, q, 0, [Fraction(3)])]
    for g in reps:
        inv = coset_invariants(g, p, q)
        for _ in range(50):
            h1, h2 = random_h(p, q, rng), random_h(p, q, rng)
            assert coset_invariants(h1 @ g @ h2, p, q) == inv


def test_invariant_json():
    assert CosetInvariant(0, 1, (Fraction(2),)).to_json() == {"k": 0, "nu": 1, "a": ["2/1"]}


def test_odd_minus_one_multiplicity_is_inconsistent(monkeypatch):
    from orbitlab import symspace

    monkeypatch.setattr(symspace, "tau", lambda g, p, q: Matrix.diag([-1, 1, 1]))
    with pytest.raises(InconsistencyError):
        symspace.coset_invariants(Matrix.identity(3), 1, 2)
