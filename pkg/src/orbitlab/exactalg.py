"""
Exact scalar domains and dense linear algebra over them.

Three domains are supported: the rationals (elements are plain
``fractions.Fraction``), prime fields ``F_l`` (elements are :class:`Mod`)
and cyclotomic fields ``Q(zeta_m)`` (elements are :class:`Cyc`).  Nothing in
this module ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class DomainMismatchError(ValueError):
    """Operands live in different scalar domains."""


class ShapeError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """An internal cross-check failed; results would be untrustworthy."""


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    return Fraction(text)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


# -- prime field elements ------------------------------------------------


class Mod:
    """Residue class modulo a prime ``ell``, stored in ``[0, ell)``."""

    __slots__ = ("value", "ell")

    def __init__(self, value: int, ell: int):
        self.value = value % ell
        self.ell = ell

    def _other(self, other) -> int:
        if isinstance(other, Mod):
            if other.ell != self.ell:
                raise DomainMismatchError(f"F_{self.ell} vs F_{other.ell}")
            return other.value
        if isinstance(other, int):
            return other % self.ell
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.ell) % self.ell
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.value + o, self.ell)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.value - o, self.ell)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.value, self.ell)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(self.value * o, self.ell)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.value, self.ell)

    def inverse(self) -> "Mod":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.ell}")
        return Mod(pow(self.value, -1, self.ell), self.ell)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * Mod(o, self.ell).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.ell) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Mod(pow(self.value, k, self.ell), self.ell)

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.ell == other.ell and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self._other(other)
            except ValueError:  # denominator divisible by ell
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.ell))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Mod({self.value}, {self.ell})"


# -- cyclotomic field elements ---------------------------------------------


def _poly_divmod_int(num: list[int], den: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (low degree first), den monic."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise InconsistencyError("inexact cyclotomic division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("m must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class Cyc:
    """Element of Q(zeta_m) as a rational polynomial reduced modulo Phi_m."""

    __slots__ = ("coeffs", "m")

    def __init__(self, coeffs: Iterable, m: int):
        phi = cyclotomic_polynomial(m)
        deg = len(phi) - 1
        c = [Fraction(x) for x in coeffs]
        # reduce modulo the monic Phi_m
        for i in range(len(c) - 1, deg - 1, -1):
            lead = c[i]
            if lead:
                for j in range(deg + 1):
                    c[i - deg + j] -= lead * phi[j]
        c = c[:deg] + [Fraction(0)] * (deg - len(c))
        self.coeffs = tuple(c)
        self.m = m

    @classmethod
    def zeta(cls, m: int, j: int = 1) -> "Cyc":
        j %= m
        return cls([0] * j + [1], m)

    def _other(self, other):
        if isinstance(other, Cyc):
            if other.m != self.m:
                raise DomainMismatchError(f"Cyc:{self.m} vs Cyc:{other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyc([other], self.m)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Cyc([a + b for a, b in zip(self.coeffs, o.coeffs)], self.m)

    __radd__ = __add__

    def __neg__(self):
        return Cyc([-a for a in self.coeffs], self.m)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * (2 * len(self.coeffs))
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return Cyc(prod, self.m)

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if not self:
            raise ZeroDivisionError("0 has no inverse in a cyclotomic field")
        # extended Euclid: s*self + t*Phi = 1 in Q[t]
        a = Polynomial(self.coeffs, QQ)
        b = Polynomial(cyclotomic_polynomial(self.m), QQ)
        s0, s1 = Polynomial([1], QQ), Polynomial([], QQ)
        while not b.is_zero():
            quo, rem = divmod(a, b)
            a, b = b, rem
            s0, s1 = s1, s0 - quo * s1
        if a.degree() != 0:
            raise InconsistencyError("cyclotomic modulus is not irreducible")
        return Cyc([c / a.coeffs[0] for c in s0.coeffs], self.m)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        result = Cyc([1], self.m)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other):
        try:
            o = self._other(other)
        except DomainMismatchError:
            return False
        if o is NotImplemented:
            return o
        return self.coeffs == o.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.coeffs, self.m))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"Cyc({[str(c) for c in self.coeffs]}, m={self.m})"


# -- domains ---------------------------------------------------------------


@dataclass(frozen=True)
class Rationals:
    characteristic = 0

    @property
    def tag(self) -> str:
        return "Q"

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def __call__(self, value) -> Fraction:
        if isinstance(value, str):
            return _parse_fraction(value)
        if isinstance(value, (Mod, Cyc)):
            raise DomainMismatchError(f"cannot coerce {value!r} into Q")
        return Fraction(value)

    def format(self, value) -> str:
        value = Fraction(value)
        return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class PrimeField:
    ell: int

    def __post_init__(self):
        if not _is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")

    @property
    def characteristic(self) -> int:
        return self.ell

    @property
    def tag(self) -> str:
        return f"Fp:{self.ell}"

    @property
    def zero(self) -> Mod:
        return Mod(0, self.ell)

    @property
    def one(self) -> Mod:
        return Mod(1, self.ell)

    def __call__(self, value) -> Mod:
        if isinstance(value, Mod):
            if value.ell != self.ell:
                raise DomainMismatchError(f"F_{value.ell} element in F_{self.ell}")
            return value
        if isinstance(value, str):
            value = _parse_fraction(value)
        if isinstance(value, Fraction):
            return Mod(value.numerator, self.ell) / value.denominator
        if isinstance(value, Cyc):
            raise DomainMismatchError("cannot coerce a cyclotomic value into F_l")
        return Mod(int(value), self.ell)

    def format(self, value) -> str:
        return str(self(value).value)


@dataclass(frozen=True)
class Cyclotomic:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("cyclotomic order must be positive")

    characteristic = 0

    @property
    def tag(self) -> str:
        return f"Cyc:{self.m}"

    @property
    def degree(self) -> int:
        return len(cyclotomic_polynomial(self.m)) - 1

    @property
    def zero(self) -> Cyc:
        return Cyc([], self.m)

    @property
    def one(self) -> Cyc:
        return Cyc([1], self.m)

    def zeta(self, j: int = 1) -> Cyc:
        return Cyc.zeta(self.m, j)

    def __call__(self, value) -> Cyc:
        if isinstance(value, Cyc):
            if value.m != self.m:
                raise DomainMismatchError(f"Cyc:{value.m} element in Cyc:{self.m}")
            return value
        if isinstance(value, str):
            return Cyc([_parse_fraction(c) for c in value.split(",")], self.m)
        if isinstance(value, Mod):
            raise DomainMismatchError("cannot coerce an F_l value into Q(zeta)")
        return Cyc([value], self.m)

    def format(self, value) -> str:
        return ",".join(QQ.format(c) for c in self(value).coeffs)


Domain = Rationals | PrimeField | Cyclotomic

QQ = Rationals()


def parse_domain(spec: str) -> Domain:
    """``"Q"``, ``"Fp:<l>"`` or ``"Cyc:<m>"``."""
    spec = spec.strip()
    if spec in ("Q", "QQ"):
        return QQ
    kind, _, arg = spec.partition(":")
    if kind == "Fp" and arg:
        return PrimeField(int(arg))
    if kind == "Cyc" and arg:
        return Cyclotomic(int(arg))
    raise ValueError(f"unknown scalar domain {spec!r}")


# -- polynomials ---------------------------------------------------------------


class Polynomial:
    """Univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs: Iterable, domain: Domain = QQ):
        c = [domain(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)
        self.domain = domain

    def _check(self, other: "Polynomial"):
        if self.domain != other.domain:
            raise DomainMismatchError(f"{self.domain.tag} vs {other.domain.tag}")

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "Polynomial":
        return Polynomial([c / self.lead for c in self.coeffs], self.domain)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        zero = self.domain.zero
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)], self.domain)

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], self.domain)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial([c * other for c in self.coeffs], self.domain)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial([], self.domain)
        out = [self.domain.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, self.domain)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial([1], self.domain)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Polynomial"):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        quo = [self.domain.zero] * max(len(rem) - dq, 0)
        inv_lead = self.domain.one / other.lead
        for i in range(len(rem) - 1 - dq, -1, -1):
            c = rem[i + dq] * inv_lead
            quo[i] = c
            if c:
                for j, d in enumerate(other.coeffs):
                    rem[i + j] -= c * d
        return Polynomial(quo, self.domain), Polynomial(rem[:dq], self.domain)

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:], self.domain)

    def __call__(self, x):
        acc = self.domain.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.domain == other.domain and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.domain))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree(), -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            coeff = str(c) if not isinstance(c, Mod) else str(c.value)
            if mono and coeff == "1":
                coeff = ""
            elif mono and coeff == "-1":
                coeff = "-"
            terms.append(coeff + ("*" if coeff not in ("", "-") and mono else "") + mono)
        return " + ".join(terms).replace("+ -", "- ")


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd (zero if both inputs are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f if f.is_zero() else f.monic()


def is_squarefree(f: Polynomial) -> bool:
    """gcd(f, f') is a unit.

    Only meaningful in characteristic 0 or when the characteristic exceeds
    ``deg f``.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has no squarefree decomposition")
    return poly_gcd(f, f.derivative()).degree() == 0


# -- elimination kernels ---------------------------------------------------------


def _echelon_integer(rows: list[list[Fraction]], ncols: int, reduced: bool):
    """Fraction-free Gauss(-Jordan) elimination with content reduction.

    Returns (rows, pivots).  When ``reduced`` the rows are normalised so the
    pivots are 1 and are returned as Fractions.
    """
    work = []
    for row in rows:
        den = 1
        for x in row:
            if x.denominator != 1:
                den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        if any(ints):
            work.append(ints)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        best = None
        for i in range(r, len(work)):
            v = work[i][col]
            if v and (best is None or abs(v) < abs(work[best][col])):
                best = i
        if best is None:
            continue
        work[r], work[best] = work[best], work[r]
        prow = work[r]
        pv = prow[col]
        targets = range(len(work)) if reduced else range(r + 1, len(work))
        for i in targets:
            if i == r:
                continue
            row = work[i]
            a = row[col]
            if not a:
                continue
            g = math.gcd(pv, a)
            mp, ma = pv // g, a // g
            new = [mp * x - ma * y for x, y in zip(row, prow)]
            content = 0
            for x in new:
                if x:
                    content = math.gcd(content, x)
                    if content == 1:
                        break
            if content > 1:
                new = [x // content for x in new]
            work[i] = new
        pivots.append(col)
        r += 1
    work = work[:r]
    if reduced:
        work = [[Fraction(x, row[c]) for x in row] for row, c in zip(work, pivots)]
    return work, pivots


def _echelon_modp(rows: list[list[int]], ncols: int, ell: int, reduced: bool):
    work = [[x % ell for x in row] for row in rows]
    work = [row for row in work if any(row)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        for i in range(r, len(work)):
            if work[i][col]:
                break
        else:
            continue
        work[r], work[i] = work[i], work[r]
        inv = pow(work[r][col], -1, ell)
        prow = [x * inv % ell for x in work[r]]
        work[r] = prow
        targets = range(len(work)) if reduced else range(r + 1, len(work))
        for i in targets:
            if i == r:
                continue
            a = work[i][col]
            if a:
                work[i] = [(x - a * y) % ell for x, y in zip(work[i], prow)]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def _echelon_field(rows, ncols: int, reduced: bool):
    work = [list(row) for row in rows if any(bool(x) for x in row)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        for i in range(r, len(work)):
            if work[i][col]:
                break
        else:
            continue
        work[r], work[i] = work[i], work[r]
        inv = 1 / work[r][col]
        prow = [x * inv for x in work[r]]
        work[r] = prow
        targets = range(len(work)) if reduced else range(r + 1, len(work))
        for i in targets:
            if i == r:
                continue
            a = work[i][col]
            if a:
                work[i] = [x - a * y for x, y in zip(work[i], prow)]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def echelon(rows: Sequence[Sequence], ncols: int, domain: Domain, reduced: bool = True):
    """Row echelon form of ``rows`` (RREF with unit pivots when ``reduced``).

    Returns ``(rows, pivots)`` with entries as domain elements.
    """
    if isinstance(domain, Rationals):
        out, piv = _echelon_integer([list(r) for r in rows], ncols, reduced)
        if not reduced:
            out = [[Fraction(x) for x in row] for row in out]
        return out, piv
    if isinstance(domain, PrimeField):
        out, piv = _echelon_modp([[x.value for x in r] for r in rows], ncols, domain.ell, reduced)
        return [[Mod(x, domain.ell) for x in row] for row in out], piv
    return _echelon_field(rows, ncols, reduced)


# -- matrices -----------------------------------------------------------------


class Matrix:
    """Dense immutable matrix over one exact scalar domain."""

    __slots__ = ("_rows", "nrows", "ncols", "domain")

    def __init__(self, rows: Iterable[Iterable], domain: Domain = QQ, ncols: int | None = None):
        data = tuple(tuple(domain(x) for x in row) for row in rows)
        widths = {len(r) for r in data}
        if len(widths) > 1:
            raise ShapeError("ragged rows")
        if data:
            ncols = widths.pop()
        elif ncols is None:
            ncols = 0
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self.domain = domain

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int, domain: Domain) -> "Matrix":
        m = cls.__new__(cls)
        m._rows = rows
        m.nrows = nrows
        m.ncols = ncols
        m.domain = domain
        return m

    @classmethod
    def zeros(cls, nrows: int, ncols: int, domain: Domain = QQ) -> "Matrix":
        z = domain.zero
        return cls._raw(tuple((z,) * ncols for _ in range(nrows)), nrows, ncols, domain)

    @classmethod
    def identity(cls, n: int, domain: Domain = QQ) -> "Matrix":
        return cls.diag([1] * n, domain)

    @classmethod
    def diag(cls, values: Sequence, domain: Domain = QQ) -> "Matrix":
        n = len(values)
        z = domain.zero
        rows = tuple(tuple(domain(values[i]) if i == j else z for j in range(n)) for i in range(n))
        return cls._raw(rows, n, n, domain)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict, domain: Domain = QQ) -> "Matrix":
        """Sparse constructor: ``entries`` maps (i, j) to a value."""
        rows = [[domain.zero] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = domain(v)
        return cls._raw(tuple(tuple(r) for r in rows), nrows, ncols, domain)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple, ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    @property
    def T(self) -> "Matrix":
        rows = tuple(tuple(r[j] for r in self._rows) for j in range(self.ncols))
        return Matrix._raw(rows, self.ncols, self.nrows, self.domain)

    def _same(self, other: "Matrix"):
        if self.domain != other.domain:
            raise DomainMismatchError(f"{self.domain.tag} vs {other.domain.tag}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} + {other.shape}")
        rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))
        return Matrix._raw(rows, self.nrows, self.ncols, self.domain)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._rows), self.nrows, self.ncols, self.domain)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.domain(c)
        return Matrix._raw(tuple(tuple(c * a for a in r) for r in self._rows), self.nrows, self.ncols, self.domain)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same(other)
        if self.ncols != other.nrows:
            raise ShapeError(f"{self.shape} @ {other.shape}")
        zero = self.domain.zero
        cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
        rows = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out = []
            for col in cols:
                acc = zero
                for k, a in nz:
                    b = col[k]
                    if b:
                        acc = acc + a * b
                out.append(acc)
            rows.append(tuple(out))
        return Matrix._raw(tuple(rows), self.nrows, other.ncols, self.domain)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.nrows, self.domain)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_zero(self) -> bool:
        return not any(bool(a) for r in self._rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.domain == other.domain and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, self._rows))

    def __repr__(self):
        body = "; ".join(" ".join(_short(a) for a in r) for r in self._rows)
        return f"Matrix[{self.domain.tag}]({self.nrows}x{self.ncols}: {body})"

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        data = tuple(tuple(self._rows[i][j] for j in cols) for i in rows)
        return Matrix._raw(data, len(rows), len(cols), self.domain)

    def convert(self, domain: Domain) -> "Matrix":
        if domain == self.domain:
            return self
        return Matrix(self._rows, domain, ncols=self.ncols)

    def trace(self):
        if not self.is_square():
            raise ShapeError("trace of a non-square matrix")
        acc = self.domain.zero
        for i in range(self.nrows):
            acc = acc + self._rows[i][i]
        return acc

    def vec(self) -> tuple:
        """Row-major flattening."""
        return tuple(a for r in self._rows for a in r)

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ShapeError("inverse of a non-square matrix")
        n = self.nrows
        one, zero = self.domain.one, self.domain.zero
        aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self._rows)]
        red, piv = echelon(aug, 2 * n, self.domain, reduced=True)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise SingularMatrixError("matrix is singular")
        return Matrix._raw(tuple(tuple(r[n:]) for r in red[:n]), n, n, self.domain)

    def det(self):
        if not self.is_square():
            raise ShapeError("determinant of a non-square matrix")
        return determinant(self._rows, self.domain.zero, self.domain.one)

    def charpoly(self) -> Polynomial:
        """det(t*I - M)."""
        if not self.is_square():
            raise ShapeError("characteristic polynomial of a non-square matrix")
        high_to_low = berkowitz(self._rows, self.domain.zero, self.domain.one)
        return Polynomial(list(reversed(high_to_low)), self.domain)

    # serialisation

    def to_json(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "domain": self.domain.tag,
            "entries": [[self.domain.format(a) for a in r] for r in self._rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Matrix":
        try:
            domain = parse_domain(data["domain"])
            nrows, ncols = int(data["rows"]), int(data["cols"])
            entries = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix record: {exc}") from exc
        if len(entries) != nrows or any(len(r) != ncols for r in entries):
            raise ShapeError(f"entries do not match declared shape {nrows}x{ncols}")
        if isinstance(domain, Rationals):
            for r in entries:
                for a in r:
                    v = Fraction(a)
                    if "/" in a and a.strip() != f"{v.numerator}/{v.denominator}":
                        raise ValueError(f"rational {a!r} is not in lowest terms")
        return cls(entries, domain, ncols=ncols)


def _short(a) -> str:
    if isinstance(a, Mod):
        return str(a.value)
    return str(a)


def block_diag(blocks: Sequence[Matrix], domain: Domain = QQ) -> Matrix:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    entries = {}
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows):
            for j, a in enumerate(row):
                if a:
                    entries[r0 + i, c0 + j] = a
        r0 += b.nrows
        c0 += b.ncols
    return Matrix.from_entries(n, m, entries, domain)


# -- ring-generic determinants ---------------------------------------------------


def berkowitz(rows: Sequence[Sequence], zero, one) -> list:
    """Characteristic polynomial det(tI - A), coefficients highest degree first.

    Division free, so it works over any commutative ring whose elements
    support +, - and *.
    """
    n = len(rows)
    if n == 0:
        return [one]
    vect = [one, zero - rows[0][0]]
    for r in range(1, n):
        R = [rows[r][k] for k in range(r)]
        S = [rows[k][r] for k in range(r)]
        col = [one, zero - rows[r][r]]
        v = S
        for _ in range(r):
            acc = zero
            for a, b in zip(R, v):
                acc = acc + a * b
            col.append(zero - acc)
            v = [_dot(rows[i][:r], v, zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    acc = acc + col[i - j] * vect[j]
            new.append(acc)
        vect = new
    return vect


def _dot(a, b, zero):
    acc = zero
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def determinant(rows: Sequence[Sequence], zero, one):
    """Division-free determinant via the Berkowitz characteristic polynomial."""
    n = len(rows)
    c = berkowitz(rows, zero, one)[-1]
    return c if n % 2 == 0 else zero - c


# -- linear algebra operations ------------------------------------------------------


def rank(M: Matrix) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    _, piv = echelon(M.rows, M.ncols, M.domain, reduced=False)
    return len(piv)


def kernel_basis(M: Matrix) -> list[tuple]:
    """Basis of the right null space {v : M v = 0}.

    Each vector has a 1 in its own free column and 0 in the other free
    columns, so coordinates of a kernel element are read off the free
    columns directly.
    """
    domain = M.domain
    if M.nrows == 0:
        red, piv = [], []
    else:
        red, piv = echelon(M.rows, M.ncols, domain, reduced=True)
    pivset = set(piv)
    basis = []
    for f in range(M.ncols):
        if f in pivset:
            continue
        v = [domain.zero] * M.ncols
        v[f] = domain.one
        for row, pc in zip(red, piv):
            if row[f]:
                v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def free_columns(basis: Sequence[Sequence]) -> list[int]:
    """Free column of each vector produced by :func:`kernel_basis`."""
    out = []
    for v in basis:
        for j, a in enumerate(v):
            if a == 1 and all(not w[j] for w in basis if w is not v):
                out.append(j)
                break
        else:
            raise InconsistencyError("basis is not in kernel normal form")
    return out


def minimal_polynomial(M: Matrix) -> Polynomial:
    """Monic annihilating polynomial of least degree."""
    if not M.is_square():
        raise ShapeError("minimal polynomial of a non-square matrix")
    n = M.nrows
    domain = M.domain
    if n == 0:
        return Polynomial([1], domain)
    powers = [Matrix.identity(n, domain).vec()]
    current = Matrix.identity(n, domain)
    for k in range(1, n + 1):
        current = current @ M
        powers.append(current.vec())
        cols = Matrix(list(zip(*powers)), domain)
        kern = kernel_basis(cols)
        if kern:
            if len(kern) != 1 or kern[0][k] != 1:
                raise InconsistencyError("unexpected kernel while computing minimal polynomial")
            return Polynomial(kern[0], domain)
    raise InconsistencyError("no annihilating polynomial up to degree n (Cayley-Hamilton violated)")


def subspace_sum_dim(A: Sequence[Sequence], B: Sequence[Sequence], domain: Domain = QQ) -> int:
    """dim(span(A) + span(B))."""
    vectors = [tuple(v) for v in A] + [tuple(v) for v in B]
    if not vectors:
        return 0
    lengths = {len(v) for v in vectors}
    if len(lengths) != 1:
        raise ShapeError("vectors of unequal length")
    return rank(Matrix(vectors, domain))
