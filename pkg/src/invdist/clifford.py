"""The twisted algebra C + C*eps, matrices over it, and its complexification.

The four-dimensional real algebra is C (+) C*eps with product

    (a + b*eps)(c + d*eps) = (a*c + b*conj(d)) + (b*conj(c) + a*d)*eps,

so eps^2 = 1, i^2 = -1, i*eps = -eps*i.  It acts R-linearly on C by
(a + b*eps).z = a*z + b*conj(z).  The subgroup of upper-triangular Toeplitz
matrices with unit-phase diagonal and k-th superdiagonal entries a_k*eps^k
lands in SL(2n, R) under the left-multiplication embedding ``iota``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .records import FAIL, PASS, CheckRecord
from .scalars import GaussianRational, Scalar

__all__ = [
    "REpsElement",
    "REpsMatrix",
    "h_phase",
    "h_shift",
    "h_element",
    "iota",
    "iota_blocks",
    "h_det_check",
    "h_closure_check",
    "group_inverse",
    "CplxPairElement",
    "cplx_eps_power",
    "reduce_rotation",
    "det_scalar_matrix",
]


# ---------------------------------------------------------------------------
# Elements a + b*eps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class REpsElement:
    a: Scalar = Scalar.zero()
    b: Scalar = Scalar.zero()

    @staticmethod
    def one() -> "REpsElement":
        return REpsElement(Scalar.one())

    @staticmethod
    def i_unit() -> "REpsElement":
        return REpsElement(Scalar.i())

    @staticmethod
    def eps() -> "REpsElement":
        return REpsElement(Scalar.zero(), Scalar.one())

    @staticmethod
    def from_scalar(a: Scalar) -> "REpsElement":
        return REpsElement(a)

    def __add__(self, other: "REpsElement") -> "REpsElement":
        return REpsElement(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "REpsElement") -> "REpsElement":
        return REpsElement(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "REpsElement":
        return REpsElement(-self.a, -self.b)

    def __mul__(self, other: "REpsElement") -> "REpsElement":
        # (a+b*eps)(c+d*eps) = (ac + b*conj(d)) + (b*conj(c) + a*d)*eps
        a, b = self.a, self.b
        c, d = other.a, other.b
        return REpsElement(a * c + b * d.conjugate(),
                           b * c.conjugate() + a * d)

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def act(self, z: Scalar, zbar: Scalar) -> Tuple[Scalar, Scalar]:
        """R-linear action on C: (a+b*eps).z = a*z + b*conj(z).

        The pair (z, zbar) must satisfy the reality constraint
        zbar == conj(z); the returned pair does too.
        """
        w = self.a * z + self.b * zbar
        wbar = self.a.conjugate() * zbar + self.b.conjugate() * z
        return w, wbar

    def __str__(self) -> str:
        return f"({self.a}) + ({self.b})*eps"


def eps_times_coeff(a: Scalar, k: int) -> REpsElement:
    """The element a*eps^k (eps^k is 1 for even k, eps for odd k)."""
    if k % 2 == 0:
        return REpsElement(a)
    return REpsElement(Scalar.zero(), a)


# ---------------------------------------------------------------------------
# Matrices over the algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class REpsMatrix:
    n: int
    entries: Tuple[Tuple[REpsElement, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[REpsElement]]) -> "REpsMatrix":
        n = len(rows)
        return REpsMatrix(n, tuple(tuple(r) for r in rows))

    @staticmethod
    def identity(n: int) -> "REpsMatrix":
        one, zero = REpsElement.one(), REpsElement()
        return REpsMatrix(n, tuple(
            tuple(one if i == j else zero for j in range(n))
            for i in range(n)))

    @staticmethod
    def zeros(n: int) -> "REpsMatrix":
        zero = REpsElement()
        return REpsMatrix(n, tuple(tuple(zero for _ in range(n))
                                   for _ in range(n)))

    def __add__(self, other: "REpsMatrix") -> "REpsMatrix":
        return REpsMatrix(self.n, tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)))

    def __sub__(self, other: "REpsMatrix") -> "REpsMatrix":
        return REpsMatrix(self.n, tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)))

    def __neg__(self) -> "REpsMatrix":
        return REpsMatrix(self.n, tuple(tuple(-a for a in r)
                                        for r in self.entries))

    def __mul__(self, other: "REpsMatrix") -> "REpsMatrix":
        n = self.n
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = REpsElement()
                for k in range(n):
                    e = self.entries[i][k]
                    f = other.entries[k][j]
                    if not e.is_zero() and not f.is_zero():
                        acc = acc + e * f
                row.append(acc)
            rows.append(tuple(row))
        return REpsMatrix(n, tuple(rows))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.entries for e in r)

    def __eq__(self, other) -> bool:
        return (isinstance(other, REpsMatrix) and self.n == other.n
                and self.entries == other.entries)


# ---------------------------------------------------------------------------
# Group generators (upper-triangular Toeplitz with unit-phase diagonal)
# ---------------------------------------------------------------------------

def h_element(n: int, diag: Scalar,
              superdiag: Sequence[Scalar]) -> REpsMatrix:
    """The Toeplitz element with given diagonal phase and superdiagonal
    coefficients (a_1, ..., a_{n-1}); entry (i, i+k) is a_k*eps^k."""
    if len(superdiag) != n - 1:
        raise ValueError("need n-1 superdiagonal coefficients")
    zero = REpsElement()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j == i:
                row.append(REpsElement(diag))
            elif j > i:
                row.append(eps_times_coeff(superdiag[j - i - 1], j - i))
            else:
                row.append(zero)
        rows.append(tuple(row))
    return REpsMatrix(n, tuple(rows))


def h_phase(n: int, exponent: int = 1, symbol: str = "u") -> REpsMatrix:
    """The diagonal phase generator with formal unit u (or v)."""
    return h_element(n, Scalar.var(symbol, exponent),
                     [Scalar.zero()] * (n - 1))


def h_shift(n: int, j: int, a: Scalar) -> REpsMatrix:
    """The generator with a single coefficient a on the j-th superdiagonal."""
    if not 1 <= j <= n - 1:
        raise ValueError(f"shift index {j} out of range for n={n}")
    coeffs = [Scalar.zero()] * (n - 1)
    coeffs[j - 1] = a
    return h_element(n, Scalar.one(), coeffs)


def h_shift_formal(n: int, j: int) -> REpsMatrix:
    """h_j(a) with a the formal symbol a{j}."""
    return h_shift(n, j, Scalar.var(f"a{j}"))


# ---------------------------------------------------------------------------
# The embedding into real 2n x 2n matrices
# ---------------------------------------------------------------------------

def _re_part(x: Scalar) -> Scalar:
    return (x + x.conjugate()) * Fraction(1, 2)


def _im_part(x: Scalar) -> Scalar:
    return (x - x.conjugate()) * Scalar.of(0, Fraction(-1, 2))


_ALLOWED_IOTA_SYMBOLS = frozenset({"c", "s"})


def iota_blocks(e: REpsElement) -> List[List[Scalar]]:
    """2x2 real block of left multiplication by a + b*eps on C = R^2
    in the basis (x, y): z -> a*z + b*conj(z)."""
    ra, ia = _re_part(e.a), _im_part(e.a)
    rb, ib = _re_part(e.b), _im_part(e.b)
    return [[ra + rb, -ia + ib],
            [ia + ib, ra - rb]]


def iota(m: REpsMatrix, allow_formal: bool = False) -> List[List[Scalar]]:
    """The real 2n x 2n matrix of left multiplication on C^n = R^(2n)
    in the interleaved basis (x1, y1, ..., xn, yn).

    Entries must be numeric, possibly with the rotation symbols c, s
    (carrying c^2 + s^2 = 1); pass allow_formal=True to admit arbitrary
    symbolic entries (used by the symbolic determinant checks).
    """
    if not allow_formal:
        for row in m.entries:
            for e in row:
                syms = e.a.free_symbols() | e.b.free_symbols()
                if syms - _ALLOWED_IOTA_SYMBOLS:
                    raise ValueError(
                        f"symbolic entry not supported by iota: {sorted(syms)}")
    n = m.n
    out = [[Scalar.zero()] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            e = m.entries[i][j]
            if e.is_zero():
                continue
            blk = iota_blocks(e)
            for bi in range(2):
                for bj in range(2):
                    out[2 * i + bi][2 * j + bj] = blk[bi][bj]
    return out


def mat_mul_scalar(A: List[List[Scalar]],
                   B: List[List[Scalar]]) -> List[List[Scalar]]:
    size = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(size)), Scalar.zero())
             for j in range(size)] for i in range(size)]


def det_scalar_matrix(m: List[List[Scalar]]) -> Scalar:
    """Exact determinant by sparsity-guided Laplace expansion."""
    size = len(m)
    if size == 0:
        return Scalar.one()
    if size == 1:
        return m[0][0]
    # expand along the row with the fewest nonzero entries
    best = min(range(size), key=lambda i: sum(bool(e) for e in m[i]))
    row = m[best]
    rest = [r for k, r in enumerate(m) if k != best]
    acc = Scalar.zero()
    for j, e in enumerate(row):
        if not e:
            continue
        minor = [[r[c] for c in range(size) if c != j] for r in rest]
        cof = det_scalar_matrix(minor)
        term = e * cof
        if (best + j) % 2:
            term = -term
        acc = acc + term
    return acc


def reduce_rotation(x: Scalar) -> Scalar:
    """Reduce modulo s^2 -> 1 - c^2 until every s-exponent is 0 or 1."""
    while True:
        changed = False
        acc = Scalar.zero()
        for mono, coeff in x.terms.items():
            d = dict(mono)
            e = d.get("s", 0)
            if e >= 2:
                changed = True
                d["s"] = e - 2
                rest = Scalar.from_gauss(coeff)
                for name, ee in d.items():
                    if ee:
                        rest = rest * Scalar.var(name, ee)
                acc = acc + rest * (Scalar.one() - Scalar.var("c", 2))
            else:
                acc = acc + Scalar({mono: coeff})
        x = acc
        if not changed:
            return x


# ---------------------------------------------------------------------------
# Inverses of unit-diagonal-plus-unipotent elements
# ---------------------------------------------------------------------------

def group_inverse(g: REpsMatrix) -> REpsMatrix:
    """Inverse of g = D(I + N) with D a constant unit-phase diagonal and N
    strictly upper triangular, via the finite Neumann series."""
    n = g.n
    d = g.entries[0][0]
    if not d.b.is_zero() or not d.a.is_monomial():
        raise ValueError("diagonal must be a single-term unit in the C-part")
    for i in range(n):
        if g.entries[i][i] != d:
            raise ValueError("diagonal entries must all equal the unit phase")
        for j in range(i):
            if not g.entries[i][j].is_zero():
                raise ValueError("matrix must be upper triangular")
    d_inv = REpsElement(d.a.inverse_unit())
    # N = D^-1 (g - D); strictly upper triangular
    zero = REpsElement()
    nrows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(d_inv * g.entries[i][j] if j > i else zero)
        nrows.append(tuple(row))
    N = REpsMatrix(n, tuple(nrows))
    # (I + N)^-1 = sum_k (-N)^k, terminating after n terms
    acc = REpsMatrix.identity(n)
    power = REpsMatrix.identity(n)
    for _ in range(1, n):
        power = power * (-N)
        acc = acc + power
    # g^-1 = (I + N)^-1 D^-1
    dinv_rows = tuple(
        tuple(d_inv if i == j else zero for j in range(n)) for i in range(n))
    return acc * REpsMatrix(n, dinv_rows)


# ---------------------------------------------------------------------------
# Verification records for the matrix group
# ---------------------------------------------------------------------------

def h_det_check(n: int) -> CheckRecord:
    """Symbolic unimodularity of the generators inside the real 2n x 2n
    picture: rotation blocks [[c, -s], [s, c]] with c^2 + s^2 = 1, and the
    unipotent generators with formal coefficients."""
    if n < 2:
        raise ValueError("n must be at least 2")
    details = {}
    ok = True
    # phase generator with u replaced by c + i*s
    rot = Scalar.var("c") + Scalar.i() * Scalar.var("s")
    phase = h_element(n, rot, [Scalar.zero()] * (n - 1))
    det_phase = reduce_rotation(det_scalar_matrix(iota(phase,
                                                       allow_formal=True)))
    details["phase_det"] = str(det_phase)
    ok = ok and det_phase == Scalar.one()
    for j in range(1, n):
        g = h_shift_formal(n, j)
        det_g = det_scalar_matrix(iota(g, allow_formal=True))
        details[f"shift{j}_det"] = str(det_g)
        ok = ok and det_g == Scalar.one()
    # a mixed product
    mixed = h_element(n, rot, [Scalar.var("a1")] + [Scalar.zero()] * (n - 2))
    det_mixed = reduce_rotation(det_scalar_matrix(iota(mixed,
                                                       allow_formal=True)))
    details["mixed_det"] = str(det_mixed)
    ok = ok and det_mixed == Scalar.one()
    return CheckRecord(
        check_id=f"algebra.det.n{n}",
        statement=f"det of the embedded generators is identically 1 (n={n})",
        paper_ref="Lemma 4.2",
        status=PASS if ok else FAIL,
        details=details,
    )


def _toeplitz_form(m: REpsMatrix) -> Optional[List[REpsElement]]:
    """If m is upper-triangular Toeplitz, return its diagonal profile
    [d, a_1*eps, a_2*eps^2, ...]; otherwise None."""
    n = m.n
    profile = []
    for k in range(n):
        e = m.entries[0][k]
        for i in range(1, n - k):
            if m.entries[i][i + k] != e:
                return None
        profile.append(e)
    for i in range(n):
        for j in range(i):
            if not m.entries[i][j].is_zero():
                return None
    return profile


def _random_gauss(rng: random.Random, bound: int = 5) -> GaussianRational:
    return GaussianRational.of(
        Fraction(rng.randint(-bound, bound), rng.randint(1, bound)),
        Fraction(rng.randint(-bound, bound), rng.randint(1, bound)))


def h_closure_check(n: int, samples: int = 20, seed: int = 0) -> CheckRecord:
    """Products of random group elements stay in the Toeplitz form, with
    multiplied diagonal phases.  Phases stay formal (u and v)."""
    rng = random.Random(seed)
    ok = True
    details = {"samples": samples}
    for trial in range(samples):
        ca = [Scalar.from_gauss(_random_gauss(rng)) for _ in range(n - 1)]
        cb = [Scalar.from_gauss(_random_gauss(rng)) for _ in range(n - 1)]
        g = h_element(n, Scalar.var("u"), ca)
        gp = h_element(n, Scalar.var("v"), cb)
        prod = g * gp
        profile = _toeplitz_form(prod)
        if profile is None:
            ok = False
            details["counterexample"] = {"trial": trial}
            break
        diag = profile[0]
        if not (diag.b.is_zero()
                and diag.a == Scalar.var("u") * Scalar.var("v")):
            ok = False
            details["counterexample"] = {"trial": trial,
                                         "diagonal": str(diag)}
            break
    return CheckRecord(
        check_id=f"algebra.closure.n{n}",
        statement=("random products keep the Toeplitz form with "
                   f"multiplied phases (n={n})"),
        paper_ref="eq. (7)",
        status=PASS if ok else FAIL,
        details=details,
    )


# ---------------------------------------------------------------------------
# Complexification (C (+) Cbar) (+) (C (+) Cbar)*eps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CplxPairElement:
    """(a, c) + (b, d)*eps with all four components in the scalar ring."""

    a: Scalar = Scalar.zero()
    c: Scalar = Scalar.zero()
    b: Scalar = Scalar.zero()
    d: Scalar = Scalar.zero()

    @staticmethod
    def one() -> "CplxPairElement":
        return CplxPairElement(Scalar.one(), Scalar.one())

    @staticmethod
    def eps() -> "CplxPairElement":
        return CplxPairElement(b=Scalar.one(), d=Scalar.one())

    @staticmethod
    def diagonal(a: Scalar, c: Scalar) -> "CplxPairElement":
        return CplxPairElement(a, c)

    def __add__(self, other: "CplxPairElement") -> "CplxPairElement":
        return CplxPairElement(self.a + other.a, self.c + other.c,
                               self.b + other.b, self.d + other.d)

    def __mul__(self, other: "CplxPairElement") -> "CplxPairElement":
        # ((a,c)+(b,d)e)((a',c')+(b',d')e)
        #   = (aa' + b*conj(d'), cc' + d*conj(b'))
        #     + (ab' + b*conj(c'), cd' + d*conj(a'))e
        a, c, b, d = self.a, self.c, self.b, self.d
        a2, c2, b2, d2 = other.a, other.c, other.b, other.d
        return CplxPairElement(
            a * a2 + b * d2.conjugate(),
            c * c2 + d * b2.conjugate(),
            a * b2 + b * c2.conjugate(),
            c * d2 + d * a2.conjugate(),
        )

    def act(self, z: Scalar, w: Scalar) -> Tuple[Scalar, Scalar]:
        """Action on the complexified plane: (az + b*conj(w), cw + d*conj(z))."""
        return (self.a * z + self.b * w.conjugate(),
                self.c * w + self.d * z.conjugate())

    def is_zero(self) -> bool:
        return (self.a.is_zero() and self.c.is_zero()
                and self.b.is_zero() and self.d.is_zero())

    def __str__(self) -> str:
        return (f"({self.a},{self.c}) + ({self.b},{self.d})*eps")


def cplx_eps_power(k: int) -> CplxPairElement:
    return CplxPairElement.one() if k % 2 == 0 else CplxPairElement.eps()


def cplx_pair_times_eps_power(a: Scalar, b: Scalar,
                              k: int) -> CplxPairElement:
    """(a, b)*eps^k as an algebra element."""
    return CplxPairElement.diagonal(a, b) * cplx_eps_power(k)
