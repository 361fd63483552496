"""Exact coefficient arithmetic.

Everything downstream computes over the ring

    K = Q(i)[lam, a1, a1~, a2, a2~, ...][u, u^-1]

where ``lam`` is the holomorphic parameter, ``u`` is a formal unit-modulus
phase (conjugation negates its exponent, so u*conj(u) == 1 automatically),
and each ``ak`` has a formal conjugate ``ak~``.  Extra symbols (``c``, ``s``
for rational rotation blocks, or ad-hoc names) are allowed; ``lam``, ``c``
and ``s`` are real and fixed by conjugation.

All arithmetic is exact; there is no floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Sequence, Tuple

__all__ = [
    "GaussianRational",
    "Scalar",
    "AffineExponent",
    "generalized_binomial",
    "falling_factorial",
    "rank_over_function_field",
]


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianRational:
    """An element re + i*im of Q(i), with exact Fraction components."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        """The multiplicative norm re^2 + im^2."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational.of(1)
GR_I = GaussianRational.of(0, 1)


# ---------------------------------------------------------------------------
# The coefficient ring K
# ---------------------------------------------------------------------------

# Symbols fixed (and real) under conjugation.
_REAL_VARS = frozenset({"lam", "c", "s"})
# Unit-modulus symbols: conjugation negates the (Laurent) exponent.
# u is the primary formal phase; v is a second independent one (used when
# two group elements with unrelated phases meet in the same computation).
_UNIT_VARS = frozenset({"u", "v"})

Mono = Tuple[Tuple[str, int], ...]
_EMPTY_MONO: Mono = ()


def _var_rank(name: str) -> Tuple[int, str]:
    # Fixed total order: lam first, then u, then everything else by name.
    if name == "lam":
        return (0, name)
    if name in _UNIT_VARS:
        return (1, name)
    return (2, name)


def _mono_sorted(pairs: Iterable[Tuple[str, int]]) -> Mono:
    return tuple(sorted(((n, e) for n, e in pairs if e != 0),
                        key=lambda p: _var_rank(p[0])))


def _mono_key(m: Mono):
    # Lexicographic comparison key in the fixed variable order.
    return tuple((_var_rank(n), e) for n, e in m)


def _mono_mul(m1: Mono, m2: Mono) -> Mono:
    if not m1:
        return m2
    if not m2:
        return m1
    acc: Dict[str, int] = dict(m1)
    for n, e in m2:
        acc[n] = acc.get(n, 0) + e
    return _mono_sorted(acc.items())


def conj_symbol(name: str) -> str:
    """The conjugate partner of a symbol name (u is handled by exponent)."""
    if name in _REAL_VARS or name in _UNIT_VARS:
        return name
    if name.endswith("~"):
        return name[:-1]
    return name + "~"


class Scalar:
    """Sparse element of K: a dict from monomials to Gaussian rationals.

    Immutable; all operations return new values.  Canonical form (sorted
    terms, zero coefficients pruned) is maintained on construction.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Dict[Mono, GaussianRational] | None = None):
        pruned = {m: c for m, c in (terms or {}).items() if not c.is_zero()}
        object.__setattr__(self, "terms", pruned)
        object.__setattr__(self, "_hash", None)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    @staticmethod
    def from_gauss(g: GaussianRational) -> "Scalar":
        return Scalar({_EMPTY_MONO: g})

    @staticmethod
    def of(re, im=0) -> "Scalar":
        return Scalar.from_gauss(GaussianRational.of(re, im))

    @staticmethod
    def i() -> "Scalar":
        return Scalar.from_gauss(GR_I)

    @staticmethod
    def var(name: str, exp: int = 1,
            coeff: GaussianRational = GR_ONE) -> "Scalar":
        if exp < 0 and name not in _UNIT_VARS:
            raise ValueError(f"negative exponent only allowed on u, got {name}")
        return Scalar({_mono_sorted([(name, exp)]): coeff})

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, GaussianRational):
            return Scalar.from_gauss(x)
        if isinstance(x, (int, Fraction)):
            return Scalar.of(x)
        return NotImplemented

    def __add__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self.terms)
        for m, c in other.terms.items():
            prev = acc.get(m)
            acc[m] = c if prev is None else prev + c
        return Scalar(acc)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return Scalar._coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc: Dict[Mono, GaussianRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                c = c1 * c2
                prev = acc.get(m)
                acc[m] = c if prev is None else prev + c
        return Scalar(acc)

    __rmul__ = __mul__

    def __pow__(self, exp: int) -> "Scalar":
        if exp < 0:
            return self.inverse_unit() ** (-exp)
        result = _ONE
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    # -- involution and structure -----------------------------------------

    def conjugate(self) -> "Scalar":
        acc: Dict[Mono, GaussianRational] = {}
        for m, c in self.terms.items():
            pairs = []
            for name, e in m:
                if name in _UNIT_VARS:
                    pairs.append((name, -e))
                else:
                    pairs.append((conj_symbol(name), e))
            acc[_mono_sorted(pairs)] = c.conj()
        return Scalar(acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        other = Scalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def free_symbols(self) -> frozenset:
        return frozenset(n for m in self.terms for n, _ in m)

    def is_constant(self) -> bool:
        return all(m == _EMPTY_MONO for m in self.terms)

    def constant_value(self) -> GaussianRational:
        if not self.terms:
            return GR_ZERO
        if not self.is_constant():
            raise ValueError(f"not a constant scalar: {self}")
        return self.terms[_EMPTY_MONO]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse_unit(self) -> "Scalar":
        """Inverse of a single-term scalar (exponents negate; only valid
        when every negative exponent lands on a Laurent symbol)."""
        if len(self.terms) != 1:
            raise ValueError("inverse_unit requires a single-term scalar")
        (m, c), = self.terms.items()
        for name, _ in m:
            if name not in _UNIT_VARS:
                raise ValueError(f"cannot invert symbol {name}")
        inv_m = _mono_sorted((n, -e) for n, e in m)
        return Scalar({inv_m: c.inverse()})

    # -- substitution -----------------------------------------------------

    def substitute(self, assignments: Dict[str, "Scalar"]) -> "Scalar":
        """Replace symbols by scalar values.  Laurent exponents require the
        assigned value to be an invertible single-term scalar."""
        assignments = {k: Scalar.from_gauss(v)
                       if isinstance(v, GaussianRational) else v
                       for k, v in assignments.items()}
        result = _ZERO
        for m, c in self.terms.items():
            term = Scalar.from_gauss(c)
            leftover = []
            for name, e in m:
                if name in assignments:
                    val = assignments[name]
                    term = term * (val ** e if e >= 0
                                   else val.inverse_unit() ** (-e))
                else:
                    leftover.append((name, e))
            if leftover:
                term = term * Scalar({_mono_sorted(leftover): GR_ONE})
            result = result + term
        return result

    # -- univariate view --------------------------------------------------

    def lam_coeffs(self) -> List[GaussianRational]:
        """Coefficient list [c0, c1, ...] of a polynomial in lam alone."""
        extra = self.free_symbols() - {"lam"}
        if extra:
            raise ValueError(
                f"entry contains non-lam symbols {sorted(extra)}; "
                "specialize group parameters before taking ranks")
        if not self.terms:
            return []
        deg = max(dict(m).get("lam", 0) for m in self.terms)
        coeffs = [GR_ZERO] * (deg + 1)
        for m, c in self.terms.items():
            coeffs[dict(m).get("lam", 0)] = c
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return coeffs

    # -- display ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_key):
            c = self.terms[m]
            factors = [str(c)] if m == _EMPTY_MONO or str(c) != "1" else []
            for name, e in m:
                factors.append(name if e == 1 else f"{name}^{e}")
            parts.append("*".join(factors) if factors else "1")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Scalar({self})"


_ZERO = Scalar({})
_ONE = Scalar({_EMPTY_MONO: GR_ONE})

LAM = Scalar.var("lam")
U = Scalar.var("u")


# ---------------------------------------------------------------------------
# Affine exponents r + s*lam
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class AffineExponent:
    """An exponent of the form r + s*lam with rational r, s."""

    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    @staticmethod
    def of(r, s=0) -> "AffineExponent":
        return AffineExponent(Fraction(r), Fraction(s))

    def __add__(self, other) -> "AffineExponent":
        if isinstance(other, AffineExponent):
            return AffineExponent(self.r + other.r, self.s + other.s)
        return AffineExponent(self.r + Fraction(other), self.s)

    def __sub__(self, other) -> "AffineExponent":
        if isinstance(other, AffineExponent):
            return AffineExponent(self.r - other.r, self.s - other.s)
        return AffineExponent(self.r - Fraction(other), self.s)

    def __neg__(self) -> "AffineExponent":
        return AffineExponent(-self.r, -self.s)

    def is_zero(self) -> bool:
        return self.r == 0 and self.s == 0

    def is_integer(self) -> bool:
        return self.s == 0 and self.r.denominator == 1

    def as_scalar(self) -> Scalar:
        return Scalar.of(self.r) + Scalar.of(self.s) * LAM

    def specialize(self, lam_value: Fraction) -> Fraction:
        return self.r + self.s * Fraction(lam_value)

    def __str__(self) -> str:
        if self.s == 0:
            return str(self.r)
        if self.r == 0:
            return f"{self.s}*lam"
        return f"{self.r}+{self.s}*lam"


def falling_factorial(sigma: AffineExponent, k: int) -> Scalar:
    """sigma*(sigma-1)*...*(sigma-k+1) as a polynomial in lam."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    acc = Scalar.one()
    for j in range(k):
        acc = acc * (sigma - j).as_scalar()
    return acc


def generalized_binomial(sigma: AffineExponent, k: int) -> Scalar:
    """Binomial coefficient C(sigma, k) with affine upper index."""
    return falling_factorial(sigma, k) * Scalar.of(Fraction(1, factorial(k)))


# ---------------------------------------------------------------------------
# Generic rank over Q(i)(lam) via fraction-free elimination
# ---------------------------------------------------------------------------

Poly = List[GaussianRational]


def _poly_trim(p: Poly) -> Poly:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return []
    out = [GR_ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca.is_zero():
            continue
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return _poly_trim(out)


def _poly_sub(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    out = []
    for k in range(n):
        ca = a[k] if k < len(a) else GR_ZERO
        cb = b[k] if k < len(b) else GR_ZERO
        out.append(ca - cb)
    return _poly_trim(out)


def _poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises if the division leaves a remainder."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    rem = list(a)
    quot = [GR_ZERO] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] / lead
        quot[k] = c
        if not c.is_zero():
            for j, cb in enumerate(b):
                rem[k + j] = rem[k + j] - c * cb
    if any(not c.is_zero() for c in rem):
        raise ArithmeticError("inexact polynomial division in elimination")
    return _poly_trim(quot)


def rank_over_function_field(matrix: Sequence[Sequence[Scalar]]) -> int:
    """Exact generic rank of a matrix of lam-polynomials over Q(i)(lam).

    Uses Bareiss-style fraction-free elimination with the pivot taken as
    the first nonzero entry in column order.  Entries containing symbols
    other than lam are rejected.
    """
    rows = [[entry.lam_coeffs() for entry in row] for row in matrix]
    if not rows:
        return 0
    n_cols = len(rows[0])
    rank = 0
    prev_pivot: Poly = [GR_ONE]
    for col in range(n_cols):
        pivot_row = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            target = rows[r]
            head = target[col]
            for cc in range(n_cols):
                num = _poly_sub(_poly_mul(pivot, target[cc]),
                                _poly_mul(head, rows[rank][cc]))
                target[cc] = _poly_divexact(num, prev_pivot)
        prev_pivot = pivot
        rank += 1
        if rank == len(rows):
            break
    return rank
