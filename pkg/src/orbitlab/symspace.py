"""
The symmetric pair (GL_n, GL_p x GL_q): symmetrisation, closed double
cosets H g H and their invariants.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactalg import (
    QQ,
    Domain,
    InconsistencyError,
    Matrix,
    Polynomial,
    PrimeField,
    Rationals,
    ShapeError,
    is_squarefree,
    minimal_polynomial,
    subspace_sum_dim,
)


def omega(p: int, q: int, domain: Domain = QQ) -> Matrix:
    return Matrix.diag([1] * p + [-1] * q, domain)


def _check_size(g: Matrix, p: int, q: int):
    if not g.is_square() or g.nrows != p + q:
        raise ShapeError(f"expected a {p + q}x{p + q} matrix, got {g.shape}")


def tau(g: Matrix, p: int, q: int) -> Matrix:
    """g . theta(g^-1) = g w g^-1 w with w = diag(1_p, -1_q)."""
    _check_size(g, p, q)
    w = omega(p, q, g.domain)
    t = g @ w @ g.inverse() @ w
    if t.det() != 1:
        raise InconsistencyError("det tau(g) != 1")
    return t


def is_closed(g: Matrix, p: int, q: int) -> bool:
    """H g H is closed iff tau(g) is semisimple."""
    return is_squarefree(minimal_polynomial(tau(g, p, q)))


def rep_xpk(p: int, q: int, k: int, domain: Domain = QQ) -> Matrix:
    """Swap the first k even coordinates with the first k odd ones."""
    if not 0 <= k <= p <= q:
        raise ValueError(f"need 0 <= k <= p <= q, got k={k}, p={p}, q={q}")
    n = p + q
    perm = list(range(n))
    for i in range(k):
        perm[i], perm[p + i] = p + i, i
    return Matrix.from_entries(n, n, {(i, perm[i]): 1 for i in range(n)}, domain)


def rep_nu_block(p: int, q: int, k: int, a_values: Sequence, domain: Domain = QQ) -> Matrix:
    """Closed representative with nu = len(a_values) quadratic blocks.

    Coordinates (i, n - nu + i) carry [[1, 1], [a - 1, a + 1]] and the middle
    n - 2 nu coordinates carry x_{p-nu,k}.
    """
    if isinstance(domain, PrimeField) and domain.ell == 2:
        raise ValueError("the 2x2 block has determinant 2; characteristic 2 is excluded")
    a_values = [domain(a) for a in a_values]
    nu = len(a_values)
    if nu > p - k:
        raise ValueError(f"nu = {nu} exceeds p - k = {p - k}")
    for a in a_values:
        if a * a == 1:
            raise ValueError(f"a = {a} has a^2 = 1")
    n = p + q
    middle = rep_xpk(p - nu, q - nu, k, domain)
    entries = {}
    for i in range(n - 2 * nu):
        for j in range(n - 2 * nu):
            if middle[i, j]:
                entries[nu + i, nu + j] = middle[i, j]
    for i, a in enumerate(a_values):
        r, s = i, n - nu + i
        entries[r, r] = 1
        entries[r, s] = 1
        entries[s, r] = a - 1
        entries[s, s] = a + 1
    return Matrix.from_entries(n, n, {key: v for key, v in entries.items() if v}, domain)


@dataclass(frozen=True)
class CosetInvariant:
    """(k, nu, a-values): -1 has multiplicity 2k and each a gives t^2 - 2at + 1."""

    k: int
    nu: int
    a_values: tuple

    def to_json(self, domain: Domain = QQ) -> dict:
        return {"k": self.k, "nu": self.nu, "a": [domain.format(a) for a in self.a_values]}


def _sort_key(a):
    if isinstance(a, Fraction):
        return (0, a)
    return (1, getattr(a, "value", 0))


def _rational_roots(f: Polynomial) -> list:
    """Roots in Q with multiplicity (rational root theorem)."""
    roots = []
    while f.degree() > 0:
        den = 1
        for c in f.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in f.coeffs]
        if ints[0] == 0:
            roots.append(Fraction(0))
            f = f // Polynomial([0, 1], f.domain)
            continue
        found = None
        for num in _divisors(abs(ints[0])):
            for dnm in _divisors(abs(ints[-1])):
                for cand in (Fraction(num, dnm), Fraction(-num, dnm)):
                    if f(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots.append(found)
        f = f // Polynomial([-found, 1], f.domain)
    return roots, f


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _field_roots(f: Polynomial) -> tuple[list, Polynomial]:
    if isinstance(f.domain, Rationals):
        return _rational_roots(f)
    if isinstance(f.domain, PrimeField):
        roots = []
        for v in range(f.domain.ell):
            r = f.domain(v)
            while f.degree() > 0 and f(r) == 0:
                roots.append(r)
                f = f // Polynomial([-r, 1], f.domain)
        return roots, f
    raise ValueError(f"quadratic extraction is not supported over {f.domain.tag}")


def coset_invariants(g: Matrix, p: int, q: int) -> CosetInvariant:
    t = tau(g, p, q)
    if not is_squarefree(minimal_polynomial(t)):
        raise ValueError("H g H is not closed: tau(g) is not semisimple")
    domain = g.domain
    chi = t.charpoly()
    mult = {}
    for sign in (1, -1):
        lin = Polynomial([-sign, 1], domain)
        count = 0
        while chi.degree() > 0:
            quo, rem = divmod(chi, lin)
            if not rem.is_zero():
                break
            chi = quo
            count += 1
        mult[sign] = count
    if mult[-1] % 2:
        raise InconsistencyError(f"eigenvalue -1 has odd multiplicity {mult[-1]}")
    nu2 = chi.degree()
    if nu2 % 2:
        raise InconsistencyError("residual factor of odd degree")
    nu = nu2 // 2
    # chi is palindromic: chi(t) = t^nu S(t + 1/t) with S(u) = prod(u - 2a)
    S = _palindromic_reduce(chi, nu)
    roots, residual = _field_roots(S)
    if residual.degree() > 0:
        raise InconsistencyError(f"residual factor {residual} does not split into t^2 - 2at + 1")
    a_values = tuple(sorted((r / 2 for r in roots), key=_sort_key))
    return CosetInvariant(mult[-1] // 2, nu, a_values)


def _palindromic_reduce(chi: Polynomial, nu: int) -> Polynomial:
    """S with chi(t) = t^nu S(t + 1/t); raises if chi is not palindromic."""
    domain = chi.domain
    c = list(chi.coeffs)
    if c != c[::-1]:
        raise InconsistencyError(f"{chi} is not self-reciprocal")
    # peel off (t + 1/t)^j terms from the top
    S = [domain.zero] * (nu + 1)
    work = c[:]  # coefficient of t^(i) in chi, i = 0..2nu, centred at nu
    for j in range(nu, -1, -1):
        coef = work[nu + j]
        S[j] = coef
        if coef:
            # subtract coef * t^nu * (t + 1/t)^j
            for i in range(j + 1):
                binom = math.comb(j, i)
                work[nu + j - 2 * i] -= coef * binom
    if any(work):
        raise InconsistencyError("palindromic reduction left a remainder")
    return Polynomial(S, domain)


def h_basis(p: int, q: int, domain: Domain = QQ) -> list[Matrix]:
    n = p + q
    blocks = [range(p), range(p, n)]
    return [
        Matrix.from_entries(n, n, {(i, j): 1}, domain)
        for blk in blocks
        for i in blk
        for j in blk
    ]


def normal_space_dim(g: Matrix, p: int, q: int) -> int:
    """n^2 - dim(h + Ad_g h)."""
    _check_size(g, p, q)
    ginv = g.inverse()
    basis = h_basis(p, q, g.domain)
    moved = [g @ b @ ginv for b in basis]
    n = p + q
    return n * n - subspace_sum_dim([b.vec() for b in basis], [m.vec() for m in moved], g.domain)


def normal_dim_formula(p: int, q: int, k: int, a_values: Sequence = ()) -> int:
    """Centraliser of A in Mat_nu, plus I_{k,k} and I_{p-k-nu, q-k-nu}."""
    nu = len(a_values)
    mult = Counter(a_values)
    return sum(m * m for m in mult.values()) + 2 * k * k + 2 * (p - k - nu) * (q - k - nu)


def random_h(p: int, q: int, rng, bound: int = 3) -> Matrix:
    """Random invertible element of GL_p x GL_q with small integer entries."""
    n = p + q
    while True:
        entries = {}
        for blk in (range(p), range(p, n)):
            for i in blk:
                for j in blk:
                    v = rng.randint(-bound, bound)
                    if v:
                        entries[i, j] = v
        h = Matrix.from_entries(n, n, entries)
        if h.det() != 0:
            return h
