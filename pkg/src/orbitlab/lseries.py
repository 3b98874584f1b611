"""
Schur polynomials, spherical Whittaker values and the exterior-square
L-factor of an unramified principal series of GL_n.

Everything is exact.  Satake parameters may be rationals, elements of a
prime field or of a cyclotomic field, or the formal variables x_1..x_n
(``MPoly``), so the series identities can be checked symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exactalg import QQ, Cyc, Cyclotomic, Domain, Matrix, ShapeError, determinant


# -- multivariate polynomials --------------------------------------------------


class MPoly:
    """Sparse polynomial in x_1..x_n: {exponent tuple: coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict, nvars: int):
        self.terms = {e: c for e, c in terms.items() if c}
        self.nvars = nvars

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        return cls({(0,) * nvars: Fraction(c)}, nvars)

    @classmethod
    def var(cls, i: int, nvars: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): Fraction(1)}, nvars)

    @classmethod
    def gens(cls, nvars: int) -> list["MPoly"]:
        return [cls.var(i, nvars) for i in range(nvars)]

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ShapeError(f"{self.nvars} vs {other.nvars} variables")
            return other
        return MPoly.const(other, self.nvars)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({e: -c for e, c in self.terms.items()}, self.nvars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(out, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.const(1, self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (ShapeError, TypeError, ValueError):
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def evaluate(self, values: Sequence):
        acc = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v ** k
            acc = term + acc
        return acc

    def __repr__(self):
        return f"MPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-k for k in e])):
            c = self.terms[e]
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_value(v) -> str:
    """Short canonical text for a scalar; cyclotomic values as polynomials in zeta_m."""
    if isinstance(v, Fraction):
        return _frac(v)
    if isinstance(v, Cyc):
        terms = []
        for k, c in enumerate(v.coeffs):
            if not c:
                continue
            z = "" if k == 0 else f"zeta{v.m}" + (f"^{k}" if k > 1 else "")
            if not z:
                terms.append(_frac(c))
            elif c == 1:
                terms.append(z)
            elif c == -1:
                terms.append("-" + z)
            else:
                terms.append(f"{_frac(c)}*{z}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"
    return str(v)


def _ring(xs: Sequence):
    if not xs:
        return Fraction(0), Fraction(1)
    zero = xs[0] - xs[0]
    return zero, zero + 1


# -- partitions ------------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 0 for x in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} is not non-increasing")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts: Sequence[int], n: int) -> "Partition":
        parts = [x for x in parts]
        if any(parts[n:]):
            raise ValueError(f"{tuple(parts)} has more than {n} nonzero parts")
        return cls(tuple(parts[:n]) + (0,) * (n - len(parts)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return sum(1 for x in self.parts if x)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


def partitions(total: int, nparts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into at most ``nparts`` parts, reverse-lex."""
    if cap is None:
        cap = total
    if nparts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        if first * nparts < total:
            break
        for rest in partitions(total - first, nparts - 1, first):
            yield (first,) + rest


def partitions_upto(D: int, n: int, nonzero: int) -> Iterator[Partition]:
    """Length-n partitions with at most ``nonzero`` nonzero parts, |lambda| = 0..D."""
    for m in range(D + 1):
        for parts in partitions(m, nonzero):
            yield Partition(parts + (0,) * (n - len(parts)))


# -- Schur polynomials -------------------------------------------------------------


def complete_homogeneous(xs: Sequence, top: int) -> list:
    """[h_0, ..., h_top] of xs."""
    zero, one = _ring(xs)
    h = [one] + [zero] * top
    for x in xs:
        for k in range(1, top + 1):
            h[k] = h[k] + x * h[k - 1]
    return h


def _parts(lam, n: int | None = None) -> tuple[int, ...]:
    parts = tuple(lam.parts if isinstance(lam, Partition) else lam)
    if n is not None and len(parts) != n:
        raise ShapeError(f"partition of length {len(parts)} with {n} values")
    return parts


def schur(lam, xs: Sequence):
    """s_lambda(xs) = det(h_{lambda_i - i + j}), division free."""
    parts = _parts(lam, len(xs))
    Partition(parts)
    ell = sum(1 for x in parts if x)
    zero, one = _ring(xs)
    if ell == 0:
        return one
    h = complete_homogeneous(xs, parts[0] + ell - 1)
    rows = [
        [h[k] if 0 <= (k := parts[i] - i + j) < len(h) else zero for j in range(ell)]
        for i in range(ell)
    ]
    return determinant(rows, zero, one)


def schur_bialternant(lam, xs: Sequence):
    """det(x_i^(lambda_j + n - j)) / det(x_i^(n - j)); xs must be distinct."""
    n = len(xs)
    parts = _parts(lam, n)
    zero, one = _ring(xs)
    num = determinant([[x ** (parts[j] + n - 1 - j) for j in range(n)] for x in xs], zero, one)
    den = determinant([[x ** (n - 1 - j) for j in range(n)] for x in xs], zero, one)
    if not den:
        raise ZeroDivisionError("repeated values: the Vandermonde determinant vanishes")
    return num / den


def principal_specialization(lam) -> Fraction:
    """s_lambda(1, ..., 1) by the hook-content product."""
    parts = _parts(lam)
    n = len(parts)
    out = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            out *= Fraction(parts[i] - parts[j] + j - i, j - i)
    return out


# -- truncated power series in t -----------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_D t^D modulo t^(D+1)."""

    coeffs: tuple

    @classmethod
    def of(cls, coeffs: Sequence, D: int, zero) -> "TruncatedSeries":
        c = list(coeffs)[: D + 1]
        return cls(tuple(c + [zero] * (D + 1 - len(c))))

    @classmethod
    def geometric(cls, c, k: int, D: int, zero, one) -> "TruncatedSeries":
        """(1 - c t^k)^-1."""
        out = [zero] * (D + 1)
        power = one
        for d in range(0, D + 1, k):
            out[d] = power
            power = power * c
        return cls(tuple(out))

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, other: "TruncatedSeries"):
        if other.truncation != self.truncation:
            raise ShapeError(f"truncations {self.truncation} and {other.truncation} differ")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        D = self.truncation
        zero = self.coeffs[0] - self.coeffs[0]
        out = [zero] * (D + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(D + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(tuple(out))

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "coeffs": [{"deg": k, "poly": format_value(c) if not isinstance(c, MPoly) else str(c)}
                       for k, c in enumerate(self.coeffs)],
        }


def _variables(xs, n: int) -> list:
    if xs is None:
        return MPoly.gens(n)
    if len(xs) != n:
        raise ShapeError(f"expected {n} values, got {len(xs)}")
    return list(xs)


def lhs_series(xs, n: int, D: int) -> TruncatedSeries:
    """Sum of s_lambda(xs) t^|lambda| over lambda with lambda_n = 0.

    ``xs = None`` means the formal variables x_1..x_n.
    """
    xs = _variables(xs, n)
    zero, one = _ring(xs)
    out = [zero] * (D + 1)
    for lam in partitions_upto(D, n, n - 1):
        out[lam.size] = out[lam.size] + schur(lam, xs)
    return TruncatedSeries(tuple(out))


def rhs_product(xs, n: int, D: int) -> TruncatedSeries:
    """(1 - e_n t^n) prod_{i<j} (1 - x_i x_j t^2)^-1 prod_i (1 - x_i t)^-1."""
    if n % 2 == 0:
        raise ValueError(f"n = {n} must be odd")
    xs = _variables(xs, n)
    zero, one = _ring(xs)
    e_n = one
    for x in xs:
        e_n = e_n * x
    numer = [one] + [zero] * D
    if n <= D:
        numer[n] = zero - e_n
    series = TruncatedSeries(tuple(numer))
    for i in range(n):
        for j in range(i + 1, n):
            series = series * TruncatedSeries.geometric(xs[i] * xs[j], 2, D, zero, one)
    for x in xs:
        series = series * TruncatedSeries.geometric(x, 1, D, zero, one)
    return series


def verify_identity(n: int, D: int) -> bool:
    return lhs_series(None, n, D) == rhs_product(None, n, D)


# -- Whittaker values --------------------------------------------------------------


@dataclass(frozen=True)
class HalfLaurent:
    """q^(halves/2) as a formal monomial."""

    halves: int
    symbol: str = "q"

    @property
    def exponent(self) -> int:
        if self.halves % 2:
            raise ValueError(f"exponent {self.halves}/2 is not integral")
        return self.halves // 2

    def __str__(self):
        e = self.halves / 2 if self.halves % 2 else self.halves // 2
        return "1" if e == 0 else f"{self.symbol}^{e}"


def delta_half_exponent(lam, n: int) -> int:
    """Exponent of q in delta_B^(1/2)(varpi^lambda)."""
    parts = _parts(lam, n)
    return HalfLaurent(-sum(x * (n + 1 - 2 * i) for i, x in enumerate(parts, start=1))).exponent


def is_dominant(lam) -> bool:
    parts = _parts(lam)
    return all(a >= b for a, b in zip(parts, parts[1:]))


@dataclass(frozen=True)
class WhittakerValue:
    coeff: object
    q_power: HalfLaurent

    def to_json(self) -> dict:
        return {"coeff": format_value(self.coeff), "q_exp": self.q_power.exponent if self.coeff else 0}


def whittaker_value(lam, chi: Sequence, q_symbol: str = "q") -> WhittakerValue:
    """W(varpi^lambda) for the normalised spherical vector."""
    n = len(chi)
    parts = _parts(lam, n)
    zero, one = _ring(chi)
    if not is_dominant(parts):
        return WhittakerValue(zero, HalfLaurent(0, q_symbol))
    shift = parts[-1] if parts else 0
    coeff = schur(tuple(x - shift for x in parts), chi)
    if shift:
        det = one
        for x in chi:
            det = det * x
        coeff = coeff * det ** shift
    return WhittakerValue(coeff, HalfLaurent(2 * delta_half_exponent(parts, n), q_symbol))


# -- the GL_p x GL_(p+1) embedding ---------------------------------------------------


def interleave_embed(a: Matrix, b: Matrix) -> Matrix:
    """b on the odd positions 1, 3, ..., 2p+1 and a on the even ones."""
    p = a.nrows
    if a.shape != (p, p) or b.shape != (p + 1, p + 1):
        raise ShapeError(f"need p x p and (p+1) x (p+1), got {a.shape} and {b.shape}")
    if a.domain != b.domain:
        raise ShapeError("a and b must share a domain")
    n = 2 * p + 1
    entries = {}
    for s in range(p + 1):
        for t in range(p + 1):
            if b[s, t]:
                entries[2 * s, 2 * t] = b[s, t]
    for s in range(p):
        for t in range(p):
            if a[s, t]:
                entries[2 * s + 1, 2 * t + 1] = a[s, t]
    return Matrix.from_entries(n, n, entries, a.domain)


def embedded_unipotent_positions(p: int) -> list[tuple[int, int]]:
    """1-based (i, j), i < j, of root spaces in the upper unipotent of the embedded H'."""
    n = 2 * p + 1
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (i - j) % 2 == 0]


def modular_exponent_PH(lam, p: int) -> int:
    """Exponent of q in the modular character of P cap H' at varpi^lambda."""
    n = 2 * p + 1
    parts = _parts(lam, n)
    if parts[-1] != 0:
        raise ValueError(f"lambda_n = {parts[-1]} != 0: varpi^lambda is not in the mirabolic")
    return -sum(parts[i - 1] - parts[j - 1] for i, j in embedded_unipotent_positions(p))


# -- behaviour at t = 1 -------------------------------------------------------------


@dataclass(frozen=True)
class PoleReport:
    """(1 - t^n) / (prod (1 - x_i x_j t^2) prod (1 - x_i t)) ~ leading * (1 - t)^(-order)."""

    order: int
    leading: object

    @property
    def limit(self):
        """Value at t = 1, or None when the expression blows up."""
        if self.order < 0:
            return self.leading - self.leading
        if self.order == 0:
            return self.leading
        return None

    def to_json(self) -> dict:
        lim = self.limit
        return {
            "order": self.order,
            "leading": format_value(self.leading),
            "limit": "infinity" if lim is None else format_value(lim),
        }


def pole_order_at_one(xs: Sequence, p: int) -> PoleReport:
    n = 2 * p + 1
    if len(xs) != n:
        raise ShapeError(f"expected {n} values, got {len(xs)}")
    zero, one = _ring(xs)
    prod = one
    for x in xs:
        prod = prod * x
    if prod != 1:
        raise ValueError(f"product of the parameters is {format_value(prod)}, not 1")
    order = -1
    denom = one
    for i in range(n):
        for j in range(i + 1, n):
            c = xs[i] * xs[j]
            if c == 1:
                order += 1
                denom = denom * 2  # 1 - t^2 ~ 2 (1 - t)
            else:
                denom = denom * (one - c)
    for x in xs:
        if x == 1:
            order += 1
        else:
            denom = denom * (one - x)
    # 1 - t^n ~ n (1 - t)
    return PoleReport(order, (one * n) / denom)


# -- character input ---------------------------------------------------------------


def parse_characters(text: str) -> tuple[list, Domain]:
    """"a/b" rationals and "zeta:m:j" roots of unity, comma separated."""
    items = [s.strip() for s in text.split(",") if s.strip()]
    if not items:
        raise ValueError("no character values given")
    parsed = []
    modulus = 1
    for item in items:
        if item.startswith("zeta:"):
            try:
                _, m, j = item.split(":")
                m, j = int(m), int(j)
            except ValueError:
                raise ValueError(f"malformed root of unity {item!r}; expected zeta:m:j") from None
            if m < 1:
                raise ValueError(f"bad order {m} in {item!r}")
            parsed.append((m, j))
            modulus = math.lcm(modulus, m)
        else:
            value = Fraction(item)
            if value == 0:
                raise ValueError("character values must be nonzero")
            parsed.append(value)
    if modulus == 1 and all(isinstance(v, Fraction) for v in parsed):
        return parsed, QQ
    field = Cyclotomic(modulus)
    out = []
    for v in parsed:
        if isinstance(v, tuple):
            m, j = v
            out.append(field.zeta(j * (modulus // m)))
        else:
            out.append(field(v))
    return out, field
