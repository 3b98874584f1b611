"""
Graded sl2-modules V = V_0 + V_1 and the nilpotent orbits they label.

A graded decomposition is a multiset of pairs (lam, omega): the irreducible
summand of highest weight ``lam`` whose highest weight vector has parity
``omega``.  Decompositions with even dimension ``p`` and odd dimension ``q``
are in bijection with nilpotent orbits of GL_p x GL_q on I_{p,q}.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .exactalg import QQ, Domain, InconsistencyError, Matrix, free_columns, kernel_basis

Component = tuple[int, int]


def parity_dims(lam: int, omega: int) -> tuple[int, int]:
    """(dim of even part, dim of odd part) of V_lam^omega."""
    if lam < 0:
        raise ValueError("highest weight must be non-negative")
    if omega not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    if lam % 2:
        half = (lam + 1) // 2
        return (half, half)
    big, small = lam // 2 + 1, lam // 2
    return (big, small) if omega == 0 else (small, big)


@dataclass(frozen=True)
class GradedDecomposition:
    """Multiset of (lam, omega), kept sorted in descending order."""

    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(sorted(((int(l), int(w)) for l, w in self.components), reverse=True))
        for lam, omega in comps:
            parity_dims(lam, omega)
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *components: Component) -> "GradedDecomposition":
        return cls(tuple(components))

    @property
    def dims(self) -> tuple[int, int]:
        p = q = 0
        for lam, omega in self.components:
            a, b = parity_dims(lam, omega)
            p += a
            q += b
        return (p, q)

    @property
    def p(self) -> int:
        return self.dims[0]

    @property
    def q(self) -> int:
        return self.dims[1]

    def is_zero_orbit(self) -> bool:
        return all(lam == 0 for lam, _ in self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self) -> Iterator[Component]:
        return iter(self.components)

    def __str__(self):
        return "{" + ",".join(f"({l},{w})" for l, w in self.components) + "}"

    def to_json(self) -> dict:
        return {"components": [{"lambda": l, "omega": w} for l, w in self.components]}

    @classmethod
    def from_json(cls, data: dict | str) -> "GradedDecomposition":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(tuple((c["lambda"], c["omega"]) for c in data["components"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed decomposition record: {exc}") from exc


@lru_cache(maxsize=None)
def _enumerate(p: int, q: int, bound: Component) -> tuple[tuple[Component, ...], ...]:
    if p == 0 and q == 0:
        return ((),)
    out = []
    for lam in range(bound[0], -1, -1):
        for omega in (1, 0):
            if (lam, omega) > bound:
                continue
            a, b = parity_dims(lam, omega)
            if a <= p and b <= q:
                for rest in _enumerate(p - a, q - b, (lam, omega)):
                    out.append(((lam, omega),) + rest)
    return tuple(out)


def enumerate_decompositions(p: int, q: int) -> list[GradedDecomposition]:
    """Every graded decomposition with dims (p, q), each exactly once."""
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 and p + q >= 1")
    return [GradedDecomposition(c) for c in _enumerate(p, q, (p + q, 1))]


@dataclass(frozen=True)
class Sl2Triple:
    """Explicit (h, e, f) on V, basis ordered component by component.

    ``grading[i]`` is the parity of basis vector i.
    """

    h: Matrix
    e: Matrix
    f: Matrix
    grading: tuple[int, ...]

    def even_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.grading) if g == 0]

    def odd_indices(self) -> list[int]:
        return [i for i, g in enumerate(self.grading) if g == 1]

    def check(self) -> bool:
        """Bracket relations and parity behaviour, exactly."""
        h, e, f = self.h, self.e, self.f
        ok = (
            h @ e - e @ h == e.scale(2)
            and h @ f - f @ h == f.scale(-2)
            and e @ f - f @ e == h
        )
        n = len(self.grading)
        for i in range(n):
            for j in range(n):
                same = self.grading[i] == self.grading[j]
                if h[i, j] and not same:
                    ok = False
                if (e[i, j] or f[i, j]) and same:
                    ok = False
        return ok


def build_sl2_triple(d: GradedDecomposition, domain: Domain = QQ) -> Sl2Triple:
    """h v_j = (lam - 2j) v_j, f v_j = v_{j+1}, e v_j = j(lam - j + 1) v_{j-1}."""
    h, e, f = {}, {}, {}
    grading = []
    offset = 0
    for lam, omega in d.components:
        for j in range(lam + 1):
            i = offset + j
            h[i, i] = lam - 2 * j
            if j < lam:
                f[i + 1, i] = 1
            if j > 0:
                e[i - 1, i] = j * (lam - j + 1)
            grading.append((omega + j) % 2)
        offset += lam + 1
    n = offset
    return Sl2Triple(
        Matrix.from_entries(n, n, h, domain),
        Matrix.from_entries(n, n, e, domain),
        Matrix.from_entries(n, n, f, domain),
        tuple(grading),
    )


def m_pair(lam_i: int, omega_i: int, lam_j: int, omega_j: int) -> int:
    """Interaction number of two graded irreducibles."""
    if lam_i < 0 or lam_j < 0:
        raise ValueError("highest weights must be non-negative")
    if (lam_i - lam_j) % 2:
        return min(lam_i, lam_j) + 1
    if lam_i % 2:
        return 2 * min(lam_i, lam_j) + 2 if omega_i == omega_j else 0
    if omega_i == omega_j:
        return -abs(lam_i - lam_j) - 1
    return lam_i + lam_j + 3


def interaction_sum(d: GradedDecomposition) -> int:
    """Sum of m_{i,j} over all ordered pairs, diagonal included."""
    comps = d.components
    return sum(m_pair(li, wi, lj, wj) for li, wi in comps for lj, wj in comps)


def trace_formula(d: GradedDecomposition) -> int:
    """tr(2 - h) on I^f from the closed form in the m_{i,j}."""
    p, q = d.dims
    twice_excess = interaction_sum(d) + (p - q) ** 2
    if twice_excess % 2:
        raise InconsistencyError(f"odd half-sum {twice_excess} for {d}")
    return 2 * p * q + twice_excess // 2


def positivity_sum(d: GradedDecomposition) -> int:
    """4t(t+1) + 4 sum_i (lam_i + lam_{t+1+i}) i for all-even d with q = p + 1.

    Here the omega = 0 weights come first and the omega = 1 weights follow,
    each block sorted in descending order, and t is the size of the first
    block.
    """
    if any(lam % 2 for lam, _ in d.components):
        raise ValueError("positivity sum is defined for all-even decompositions")
    even0 = sorted((l for l, w in d.components if w == 0), reverse=True)
    even1 = sorted((l for l, w in d.components if w == 1), reverse=True)
    t = len(even0)
    if len(even1) != t + 1:
        raise ValueError("need exactly one more omega=1 summand than omega=0 summands")
    lam = even0 + even1
    return 4 * t * (t + 1) + 4 * sum((lam[i - 1] + lam[t + i]) * i for i in range(1, t + 1))


# -- brute-force linear algebra -----------------------------------------------------


def _sparse_cols(M: Matrix) -> list[list[tuple[int, object]]]:
    return [[(i, M[i, j]) for i in range(M.nrows) if M[i, j]] for j in range(M.ncols)]


def _sparse_rows(M: Matrix) -> list[list[tuple[int, object]]]:
    return [[(j, a) for j, a in enumerate(row) if a] for row in M.rows]


def _commutator_image(X_cols, X_rows, a: int, b: int, zero) -> dict:
    """Entries of [X, E_ab] = X E_ab - E_ab X as {(c, d): value}."""
    out: dict = defaultdict(lambda: zero)
    for c, val in X_cols[a]:
        out[c, b] = out[c, b] + val
    for dcol, val in X_rows[b]:
        out[a, dcol] = out[a, dcol] - val
    return {k: v for k, v in out.items() if v}


def _weight(h: Matrix, a: int, b: int):
    return h[a, a] - h[b, b]


def _blockwise_kernel(h: Matrix, X: Matrix, unknowns: list[tuple[int, int]]):
    """Kernel of E_ab -> [X, E_ab] on span(unknowns), solved weight by weight.

    ``X`` is homogeneous for ad h, so the map never mixes unknowns of
    different weight and the kernel is the direct sum of the blockwise
    kernels.  Returns kernel vectors as dicts {(a, b): coefficient}.
    """
    zero = h.domain.zero
    cols, rows = _sparse_cols(X), _sparse_rows(X)
    blocks: dict = defaultdict(list)
    for a, b in unknowns:
        blocks[_weight(h, a, b)].append((a, b))
    basis = []
    for block in blocks.values():
        images = [_commutator_image(cols, rows, a, b, zero) for a, b in block]
        targets = sorted({k for img in images for k in img})
        index = {k: i for i, k in enumerate(targets)}
        if targets:
            dense = [[zero] * len(block) for _ in targets]
            for j, img in enumerate(images):
                for k, v in img.items():
                    dense[index[k]][j] = v
            kern = kernel_basis(Matrix(dense, h.domain))
        else:
            kern = [tuple(h.domain.one if i == j else zero for i in range(len(block))) for j in range(len(block))]
        for v in kern:
            basis.append({block[i]: c for i, c in enumerate(v) if c})
    return basis


def trace_bruteforce(d: GradedDecomposition, domain: Domain = QQ) -> int:
    """tr(2 - h) on I^f, computed from explicit matrices.

    I_{p,q} is realised as the odd part of End(V), I^f as the kernel of
    ad f on it, and ad h is restricted to that kernel through the kernel's
    own coordinates.
    """
    triple = build_sl2_triple(d, domain)
    n = len(triple.grading)
    odd_pairs = [(a, b) for a in range(n) for b in range(n) if triple.grading[a] != triple.grading[b]]
    basis = _blockwise_kernel(triple.h, triple.f, odd_pairs)
    if not basis:
        return 0
    # Coordinates of ad h(v) in the kernel basis, read off the free positions.
    support = sorted({k for v in basis for k in v})
    pos = {k: i for i, k in enumerate(support)}
    zero = domain.zero
    vectors = [tuple(v.get(k, zero) for k in support) for v in basis]
    free = free_columns(vectors)
    trace = zero
    for i, v in enumerate(basis):
        image = {k: _weight(triple.h, *k) * c for k, c in v.items()}
        coords = [image.get(support[f], zero) for f in free]
        recon = defaultdict(lambda: zero)
        for c, w in zip(coords, basis):
            if c:
                for k, val in w.items():
                    recon[k] = recon[k] + c * val
        if any(recon[k] != image.get(k, zero) for k in set(recon) | set(image)):
            raise InconsistencyError("ad h does not preserve ker(ad f)")
        trace = trace + coords[i]
    value = 2 * len(basis) - trace
    return _to_int(value)


def _to_int(value) -> int:
    if hasattr(value, "denominator"):
        if value.denominator != 1:
            raise InconsistencyError(f"non-integral trace {value}")
        return int(value)
    # prime field: the answer is read back as a residue
    return value.value


def ad_f_kernel_dim(d: GradedDecomposition, domain: Domain = QQ) -> int:
    """dim I^f, measured directly."""
    triple = build_sl2_triple(d, domain)
    n = len(triple.grading)
    odd_pairs = [(a, b) for a in range(n) for b in range(n) if triple.grading[a] != triple.grading[b]]
    return len(_blockwise_kernel(triple.h, triple.f, odd_pairs))


def centralizer_dim(d: GradedDecomposition, domain: Domain = QQ) -> int:
    """dim {xi in gl_p + gl_q : [xi, e] = 0}."""
    triple = build_sl2_triple(d, domain)
    n = len(triple.grading)
    even_pairs = [(a, b) for a in range(n) for b in range(n) if triple.grading[a] == triple.grading[b]]
    return len(_blockwise_kernel(triple.h, triple.e, even_pairs))


def orbit_dim(d: GradedDecomposition, domain: Domain = QQ) -> int:
    p, q = d.dims
    return p * p + q * q - centralizer_dim(d, domain)


@lru_cache(maxsize=None)
def max_orbit_dim(p: int, q: int) -> int:
    return max(orbit_dim(d) for d in enumerate_decompositions(p, q))


def is_regular(d: GradedDecomposition, p: int, q: int) -> bool:
    if d.dims != (p, q):
        raise ValueError(f"{d} has dims {d.dims}, expected {(p, q)}")
    return orbit_dim(d) == max_orbit_dim(p, q)


def regular_decompositions(p: int, q: int) -> list[GradedDecomposition]:
    top = max_orbit_dim(p, q)
    return [d for d in enumerate_decompositions(p, q) if orbit_dim(d) == top]


def decompositions_upto(total: int) -> Iterable[GradedDecomposition]:
    """All decompositions with 1 <= p + q <= total."""
    for n in range(1, total + 1):
        for p in range(n + 1):
            yield from enumerate_decompositions(p, n - p)
