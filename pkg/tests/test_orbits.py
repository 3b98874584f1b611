import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitlab.exactalg import InconsistencyError, Matrix, PrimeField, ShapeError
from orbitlab.gradedsl2 import GradedDecomposition as G, decompositions_upto, enumerate_decompositions
from orbitlab.orbits import (
    NilpotentPair,
    NotNilpotentError,
    all_pairs,
    classify,
    finite_field_invariants,
    is_nilpotent_pair,
    is_transpose_stable,
    rank_invariant,
    representative,
    string_invariant,
    transpose_move,
    transpose_orbit,
    transpose_orbit_oracle,
)

ANCHOR = G.of((8, 1), (2, 1), (1, 1))
ZERO_12 = G.of((0, 0), (0, 1), (0, 1))


def pair(x, y, domain=None):
    p, q = len(x), len(y)
    args = () if domain is None else (domain,)
    return NilpotentPair(Matrix(x, *args, ncols=q), Matrix(y, *args, ncols=p))


def test_shape_validation():
    with pytest.raises(ShapeError):
        NilpotentPair(Matrix.zeros(1, 2), Matrix.zeros(1, 2))


def test_nilpotency_examples():
    assert is_nilpotent_pair(NilpotentPair.zero(1, 2))
    assert not is_nilpotent_pair(pair([[1, 0]], [[1], [0]]))
    assert is_nilpotent_pair(representative(G.of((2, 1))))


def test_non_nilpotent_reports_witness():
    with pytest.raises(NotNilpotentError) as info:
        classify(pair([[1, 0]], [[1], [0]]))
    assert info.value.witness_power == 1


def test_rank_invariant_examples():
    inv = rank_invariant(NilpotentPair.zero(1, 2))
    assert inv.xy[0] == 1 and inv.yx[0] == 2
    assert not any(inv.xy[1:]) and not any(inv.yx[1:]) and not any(inv.x_yx) and not any(inv.y_xy)
    reg = rank_invariant(pair([[1, 0]], [[0], [1]]))
    assert reg.yx[1] == 1 and reg.xy[1] == 0 and reg.rank_x == 1 and reg.rank_y == 1


def test_anchor_ranks():
    e = representative(ANCHOR)
    assert (e.p, e.q) == (6, 8)
    inv = rank_invariant(e)
    assert (inv.rank_x, inv.rank_y) == (6, 5)


def test_representative_examples():
    assert representative(ZERO_12) == NilpotentPair.zero(1, 2)
    assert classify(representative(G.of((2, 1)))) == G.of((2, 1))
    # V_1^0: the even highest vector is sent by f to the odd line, so e maps V_1 to V_0
    e = representative(G.of((1, 0)))
    assert e.x.is_zero() and not e.y.is_zero()


def test_regular_form_with_identity_blocks():
    # the 3x3 matrix (0 1 0; 0 0 0; 1 0 0) on V_0 + V_1, V_0 the first coordinate
    e = pair([[0, 1]], [[1], [0]])
    assert classify(e) == G.of((2, 1))


def test_classify_examples():
    assert classify(NilpotentPair.zero(1, 2)) == ZERO_12
    assert classify(pair([[1, 0]], [[0], [0]])) == G.of((1, 1), (0, 1))
    assert classify(pair([[0, 0]], [[1], [0]])) == G.of((1, 0), (0, 1))


def test_classify_over_prime_field():
    e = representative(ANCHOR, PrimeField(17))
    assert classify(e) == ANCHOR


def test_transpose_move_examples():
    assert transpose_move(NilpotentPair.zero(1, 2)) == NilpotentPair.zero(1, 2)
    moved = transpose_move(pair([[1, 0]], [[0], [0]]))
    assert moved.x.is_zero() and moved.y == Matrix([[1], [0]])
    assert classify(transpose_move(representative(G.of((2, 1))))) == G.of((2, 1))


def test_transpose_orbit_examples():
    for p in range(5):
        assert transpose_orbit(G.of((2 * p, 1))) == G.of((2 * p, 1))
    assert transpose_orbit(G.of((1, 0), (0, 1))) == G.of((1, 1), (0, 1))
    assert transpose_orbit(ANCHOR) == G.of((8, 1), (2, 1), (1, 0))
    assert not is_transpose_stable(ANCHOR)
    assert is_transpose_stable(G.of((2, 1)))
    assert is_transpose_stable(ZERO_12)


def test_anchor_transpose_oracle():
    assert transpose_orbit_oracle(ANCHOR) == transpose_orbit(ANCHOR)


def test_round_trip_and_transpose_rule():
    for d in decompositions_upto(6):
        assert classify(representative(d)) == d
        assert transpose_orbit_oracle(d) == transpose_orbit(d)
        assert string_invariant(d) == rank_invariant(representative(d))


@pytest.mark.parametrize("p,q", [(p, q) for p in range(5) for q in range(5) if p + q])
def test_invariants_distinct(p, q):
    ds = enumerate_decompositions(p, q)
    assert len({string_invariant(d) for d in ds}) == len(ds)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 1)), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_transpose_is_involution(comps):
    d = G(tuple(comps))
    assert transpose_orbit(transpose_orbit(d)) == d
    assert transpose_orbit(d).dims == d.dims


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 1)), min_size=1, max_size=3), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_classify_is_conjugation_invariant(comps, seed):
    import random

    from orbitlab.symspace import random_h

    d = G(tuple(comps))
    e = representative(d)
    p, q = e.p, e.q
    rng = random.Random(seed)
    h = random_h(p, q, rng)
    A, B = h.submatrix(range(p), range(p)), h.submatrix(range(p, p + q), range(p, p + q))
    # (x, y) -> (A x B^-1, B y A^-1)
    moved = NilpotentPair(A @ e.x @ B.inverse(), B @ e.y @ A.inverse()) if p and q else e
    assert classify(moved) == d


def test_pair_json_round_trip():
    e = representative(ANCHOR)
    assert NilpotentPair.from_json(json.dumps(e.to_json())) == e
    with pytest.raises(ValueError):
        NilpotentPair.from_json({"x": e.x.to_json()})


def test_finite_field_small():
    assert len(list(all_pairs(1, 1, 2))) == 4
    invs = finite_field_invariants(1, 2)
    assert invs == {string_invariant(d) for d in enumerate_decompositions(1, 2)}


def test_unknown_invariant_is_inconsistency(monkeypatch):
    import orbitlab.orbits as orbits

    assert classify(pair([[1]], [[0]])) == G.of((1, 1))
    monkeypatch.setattr(orbits, "_invariant_table", lambda p, q: {})
    with pytest.raises(InconsistencyError):
        classify(pair([[1]], [[0]]))


def test_regular_trace_orbit_is_transpose_stable():
    from orbitlab.gradedsl2 import trace_formula

    for p in range(5):
        for d in enumerate_decompositions(p, p + 1):
            if trace_formula(d) == 2 * p * (p + 1):
                assert is_transpose_stable(d)


def test_all_pairs_enumerates_everything():
    seen = set()
    for e in all_pairs(1, 2, 2):
        seen.add((e.x.rows, e.y.rows))
    assert len(seen) == 2 ** 4
    assert list(itertools.islice(all_pairs(1, 1, 3), 2))[1].y == Matrix([[1]], PrimeField(3))
