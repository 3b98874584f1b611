"""
Nilpotent pairs (x, y) in I_{p,q}, their rank invariants, and the transpose
involution sigma(x, y) = (y^t, x^t).

A pair is read through I_{p,q} = Hom(V_0, V_1) + Hom(V_1, V_0): entry (i, j)
of the p x q matrix ``x`` is the coefficient of the j-th odd basis vector in
e(i-th even basis vector), and ``y`` records e on V_1 the same way.  Then
``x y`` is e^2 on V_0 and ``y x`` is e^2 on V_1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .exactalg import QQ, Domain, InconsistencyError, Matrix, PrimeField, ShapeError, rank
from .gradedsl2 import GradedDecomposition, build_sl2_triple, enumerate_decompositions


class NotNilpotentError(ValueError):
    def __init__(self, message: str, witness_power: int):
        super().__init__(message)
        self.witness_power = witness_power


@dataclass(frozen=True)
class NilpotentPair:
    x: Matrix
    y: Matrix

    def __post_init__(self):
        if self.x.domain != self.y.domain:
            raise ShapeError("x and y must share a scalar domain")
        if (self.y.nrows, self.y.ncols) != (self.x.ncols, self.x.nrows):
            raise ShapeError(f"x is {self.x.shape} so y must be {(self.x.ncols, self.x.nrows)}, got {self.y.shape}")

    @property
    def p(self) -> int:
        return self.x.nrows

    @property
    def q(self) -> int:
        return self.x.ncols

    @property
    def domain(self) -> Domain:
        return self.x.domain

    @classmethod
    def zero(cls, p: int, q: int, domain: Domain = QQ) -> "NilpotentPair":
        return cls(Matrix.zeros(p, q, domain), Matrix.zeros(q, p, domain))

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, data: dict | str) -> "NilpotentPair":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(Matrix.from_json(data["x"]), Matrix.from_json(data["y"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed pair record: {exc}") from exc


@dataclass(frozen=True)
class OrbitInvariant:
    """Ranks of (xy)^k, (yx)^k, x(yx)^k, y(xy)^k for k = 0..p+q."""

    xy: tuple[int, ...]
    yx: tuple[int, ...]
    x_yx: tuple[int, ...]
    y_xy: tuple[int, ...]

    @property
    def rank_x(self) -> int:
        return self.x_yx[0]

    @property
    def rank_y(self) -> int:
        return self.y_xy[0]

    def to_json(self) -> dict:
        return {"xy": list(self.xy), "yx": list(self.yx), "x(yx)": list(self.x_yx), "y(xy)": list(self.y_xy)}


def _nilpotency_witness(e: NilpotentPair) -> int | None:
    """Smallest k <= p with (xy)^k = 0, or None when (xy)^p != 0."""
    xy = e.x @ e.y
    power = Matrix.identity(e.p, e.domain)
    for k in range(0, e.p + 1):
        if power.is_zero():
            return k
        power = power @ xy
    return None


def is_nilpotent_pair(e: NilpotentPair) -> bool:
    """(xy)^p == 0."""
    if e.p == 0:
        return True
    return ((e.x @ e.y) ** e.p).is_zero()


def rank_invariant(e: NilpotentPair) -> OrbitInvariant:
    p, q = e.p, e.q
    xy, yx = e.x @ e.y, e.y @ e.x
    seqs = ([], [], [], [])
    P = Matrix.identity(p, e.domain)  # (xy)^k
    Q = Matrix.identity(q, e.domain)  # (yx)^k
    for _ in range(p + q + 1):
        seqs[0].append(rank(P) if p else 0)
        seqs[1].append(rank(Q) if q else 0)
        seqs[2].append(rank(e.x @ Q) if p and q else 0)
        seqs[3].append(rank(e.y @ P) if p and q else 0)
        P = P @ xy
        Q = Q @ yx
    return OrbitInvariant(*(tuple(s) for s in seqs))


def string_invariant(d: GradedDecomposition) -> OrbitInvariant:
    """Rank invariant of ``representative(d)`` read off the chains of d.

    e^m is injective on the basis vectors v_j with j >= m, so each rank
    counts such vectors of the right parity.
    """
    p, q = d.dims
    count = [[0] * (p + q + 2) for _ in range(2)]  # count[s][m]: parity s, j >= m
    for lam, omega in d.components:
        for j in range(lam + 1):
            s = (omega + j) % 2
            for m in range(min(j, p + q + 1) + 1):
                count[s][m] += 1
    ks = range(p + q + 1)
    return OrbitInvariant(
        tuple(count[0][2 * k] if 2 * k <= p + q + 1 else 0 for k in ks),
        tuple(count[1][2 * k] if 2 * k <= p + q + 1 else 0 for k in ks),
        tuple(count[0][2 * k + 1] if 2 * k + 1 <= p + q + 1 else 0 for k in ks),
        tuple(count[1][2 * k + 1] if 2 * k + 1 <= p + q + 1 else 0 for k in ks),
    )


def representative(d: GradedDecomposition, domain: Domain = QQ) -> NilpotentPair:
    """The pair (x, y) carried by e of ``build_sl2_triple(d)``."""
    triple = build_sl2_triple(d, domain)
    ev, od = triple.even_indices(), triple.odd_indices()
    e = triple.e
    # e[r, c] is the coefficient of basis vector r in e(basis vector c)
    x = Matrix([[e[o, i] for o in od] for i in ev], domain, ncols=len(od))
    y = Matrix([[e[i, o] for i in ev] for o in od], domain, ncols=len(ev))
    return NilpotentPair(x, y)


@lru_cache(maxsize=None)
def _invariant_table(p: int, q: int) -> dict[OrbitInvariant, GradedDecomposition]:
    table = {}
    for d in enumerate_decompositions(p, q):
        inv = string_invariant(d)
        if inv in table:
            raise InconsistencyError(f"{d} and {table[inv]} share a rank invariant")
        table[inv] = d
    return table


def classify(e: NilpotentPair) -> GradedDecomposition:
    """The decomposition labelling the orbit of a nilpotent pair."""
    if e.p + e.q == 0:
        raise ValueError("empty pair")
    k = _nilpotency_witness(e)
    if k is None:
        raise NotNilpotentError(f"(xy)^{e.p} != 0: pair is not nilpotent", e.p)
    inv = rank_invariant(e)
    try:
        return _invariant_table(e.p, e.q)[inv]
    except KeyError:
        raise InconsistencyError(f"no decomposition of {(e.p, e.q)} matches {inv}") from None


def transpose_move(e: NilpotentPair) -> NilpotentPair:
    return NilpotentPair(e.y.T, e.x.T)


def transpose_orbit(d: GradedDecomposition) -> GradedDecomposition:
    """Odd highest weights swap their parity label; even ones keep it."""
    return GradedDecomposition(tuple((lam, 1 - omega if lam % 2 else omega) for lam, omega in d.components))


def is_transpose_stable(d: GradedDecomposition) -> bool:
    return transpose_orbit(d) == d


def transpose_orbit_oracle(d: GradedDecomposition) -> GradedDecomposition:
    """classify(transpose_move(representative(d))), by matrices."""
    return classify(transpose_move(representative(d)))


def all_pairs(p: int, q: int, ell: int) -> Iterator[NilpotentPair]:
    """Every (x, y) in I_{p,q}(F_ell), lexicographically."""
    field = PrimeField(ell)
    size = 2 * p * q
    for entries in itertools.product(range(ell), repeat=size):
        x = Matrix([entries[i * q:(i + 1) * q] for i in range(p)], field, ncols=q)
        off = p * q
        y = Matrix([entries[off + j * p: off + (j + 1) * p] for j in range(q)], field, ncols=p)
        yield NilpotentPair(x, y)


def finite_field_invariants(p: int, q: int, ell: int = 2) -> set[OrbitInvariant]:
    """Distinct rank invariants over all nilpotent pairs of I_{p,q}(F_ell)."""
    return {rank_invariant(e) for e in all_pairs(p, q, ell) if is_nilpotent_pair(e)}
