"""Polynomial-coefficient differential operators in z_1, zbar_1, ..., z_n, zbar_n.

Operators are kept in normal order (all multiplications to the left of all
derivatives) with a unique sorted term list, so equal operators compare
equal structurally.  The 2n symbols commute; the only nontrivial
commutators are [d/dz_j, z_j] = 1 and [d/dzbar_j, zbar_j] = 1.

Symbol indexing: variable j (1-based, matching the usual z_j) owns symbol
2*(j-1) for z_j and 2*(j-1)+1 for zbar_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Dict, List, Sequence, Tuple

from .clifford import REpsMatrix, group_inverse
from .scalars import Scalar, falling_factorial, AffineExponent

__all__ = [
    "WeylOp",
    "Substitution",
    "substitution_from_group",
    "conjugate_op",
    "sym_z",
    "sym_zbar",
]


def sym_z(j: int) -> int:
    return 2 * (j - 1)


def sym_zbar(j: int) -> int:
    return 2 * (j - 1) + 1


def sym_conj(s: int) -> int:
    return s ^ 1


def sym_name(s: int) -> str:
    j = s // 2 + 1
    return f"z{j}" if s % 2 == 0 else f"zbar{j}"


Expo = Tuple[int, ...]

# A polynomial in the 2n symbols with scalar coefficients.
Poly = Dict[Expo, Scalar]


def poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            c = c1 * c2
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


def poly_linear(form: Dict[int, Scalar], width: int) -> Poly:
    out: Poly = {}
    for s, c in form.items():
        if c:
            m = [0] * width
            m[s] = 1
            out[tuple(m)] = c
    return out


def poly_pow(p: Poly, e: int, width: int) -> Poly:
    out: Poly = {tuple([0] * width): Scalar.one()}
    for _ in range(e):
        out = poly_mul(out, p)
    return out


class WeylOp:
    """Normal-ordered operator: sum of coeff * z^mono * d^deriv terms."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[Tuple[Expo, Expo], Scalar] | None = None):
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(n: int) -> "WeylOp":
        return WeylOp(n)

    @staticmethod
    def identity(n: int) -> "WeylOp":
        e = tuple([0] * (2 * n))
        return WeylOp(n, {(e, e): Scalar.one()})

    @staticmethod
    def term(n: int, coeff: Scalar, mono: Dict[int, int] | None = None,
             deriv: Dict[int, int] | None = None) -> "WeylOp":
        m = [0] * (2 * n)
        d = [0] * (2 * n)
        for s, e in (mono or {}).items():
            m[s] = e
        for s, e in (deriv or {}).items():
            d[s] = e
        return WeylOp(n, {(tuple(m), tuple(d)): coeff})

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "WeylOp") -> "WeylOp":
        acc = dict(self.terms)
        for k, c in other.terms.items():
            prev = acc.get(k)
            acc[k] = c if prev is None else prev + c
        return WeylOp(self.n, acc)

    def __sub__(self, other: "WeylOp") -> "WeylOp":
        return self + (-other)

    def __neg__(self) -> "WeylOp":
        return WeylOp(self.n, {k: -c for k, c in self.terms.items()})

    def scale(self, c: Scalar) -> "WeylOp":
        return WeylOp(self.n, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, WeylOp) and self.n == other.n
                and self.terms == other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- composition ------------------------------------------------------

    def compose(self, other: "WeylOp") -> "WeylOp":
        """Normal-ordered product self o other."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        width = 2 * self.n
        acc: Dict[Tuple[Expo, Expo], Scalar] = {}
        for (m1, d1), c1 in self.terms.items():
            for (m2, d2), c2 in other.terms.items():
                # push d1 through m2, one symbol at a time
                base = c1 * c2
                # enumerate per-symbol contraction orders
                choices: List[List[Tuple[int, Scalar]]] = []
                for s in range(width):
                    b, m = d1[s], m2[s]
                    opts = []
                    for k in range(min(b, m) + 1):
                        factor = Scalar.of(comb(b, k)) * falling_factorial(
                            AffineExponent.of(m), k)
                        opts.append((k, factor))
                    choices.append(opts)
                self._accumulate(acc, base, m1, d1, m2, d2, choices)
        return WeylOp(self.n, acc)

    @staticmethod
    def _accumulate(acc, base, m1, d1, m2, d2, choices):
        width = len(m1)

        def rec(s, coeff, ks):
            if s == width:
                mono = tuple(m1[i] + m2[i] - ks[i] for i in range(width))
                deriv = tuple(d1[i] - ks[i] + d2[i] for i in range(width))
                key = (mono, deriv)
                prev = acc.get(key)
                acc[key] = coeff if prev is None else prev + coeff
                return
            for k, factor in choices[s]:
                ks.append(k)
                rec(s + 1, coeff * factor, ks)
                ks.pop()

        rec(0, base, [])

    def __pow__(self, e: int) -> "WeylOp":
        out = WeylOp.identity(self.n)
        for _ in range(e):
            out = out.compose(self)
        return out

    # -- action on polynomials (oracle support) ---------------------------

    def apply_poly(self, p: Poly) -> Poly:
        width = 2 * self.n
        out: Poly = {}
        for (m1, d1), c1 in self.terms.items():
            for mono, c in p.items():
                coeff = c1 * c
                ok = True
                new = list(mono)
                for s in range(width):
                    b = d1[s]
                    if b == 0:
                        continue
                    if new[s] < b:
                        ok = False
                        break
                    # d^b z^e = e!/(e-b)! z^(e-b)
                    e = new[s]
                    f = 1
                    for t in range(b):
                        f *= e - t
                    coeff = coeff * Scalar.of(f)
                    new[s] = e - b
                if not ok or not coeff:
                    continue
                key = tuple(new[s] + m1[s] for s in range(width))
                prev = out.get(key)
                out[key] = coeff if prev is None else prev + coeff
        return {m: c for m, c in out.items() if c}

    # -- display ----------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (mono, deriv) in sorted(self.terms):
            c = self.terms[(mono, deriv)]
            factors = [f"({c})"]
            for s, e in enumerate(mono):
                if e:
                    factors.append(sym_name(s) + (f"^{e}" if e > 1 else ""))
            for s, e in enumerate(deriv):
                if e:
                    factors.append(f"d_{sym_name(s)}"
                                   + (f"^{e}" if e > 1 else ""))
            parts.append("*".join(factors))
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Linear substitutions induced by group elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    """A linear change of the 2n symbols with its exact inverse.

    ``fwd[s]`` expresses the image of symbol s as a linear form
    {symbol: coefficient}; ``inv`` likewise for the inverse map.
    Rows come in conjugate pairs (the zbar row is the entrywise conjugate
    of the z row with z and zbar swapped).
    """

    n: int
    fwd: Tuple[Dict[int, Scalar], ...]
    inv: Tuple[Dict[int, Scalar], ...]
    unimodular: bool = True

    @staticmethod
    def identity(n: int) -> "Substitution":
        rows = tuple({s: Scalar.one()} for s in range(2 * n))
        return Substitution(n, rows, tuple(dict(r) for r in rows))

    def check_reality(self) -> bool:
        for rows in (self.fwd, self.inv):
            for j in range(1, self.n + 1):
                rz = rows[sym_z(j)]
                rzb = rows[sym_zbar(j)]
                mirror = {sym_conj(s): c.conjugate() for s, c in rz.items()}
                if {s: c for s, c in mirror.items() if c} != \
                        {s: c for s, c in rzb.items() if c}:
                    return False
        return True

    def inverse(self) -> "Substitution":
        return Substitution(self.n, self.inv, self.fwd, self.unimodular)

    def then(self, second: "Substitution") -> "Substitution":
        """The substitution of the product group element g2*g1 when self
        belongs to g1 and second to g2 (coordinates map by g2 after g1)."""
        def compose_rows(outer, inner):
            rows = []
            for s in range(2 * self.n):
                form: Dict[int, Scalar] = {}
                for t, c in outer[s].items():
                    for r, d in inner[t].items():
                        prev = form.get(r)
                        val = c * d
                        form[r] = val if prev is None else prev + val
                rows.append({r: v for r, v in form.items() if v})
            return tuple(rows)

        # forward: x -> g2*(g1*x): row of the composite = second.fwd applied
        # to self.fwd
        fwd = compose_rows(second.fwd, self.fwd)
        inv = compose_rows(self.inv, second.inv)
        return Substitution(self.n, fwd, inv,
                            self.unimodular and second.unimodular)


def _rows_from_matrix(g: REpsMatrix) -> Tuple[Dict[int, Scalar], ...]:
    """Linear forms for (g.z)_i = sum_j g_ij . z_j with the eps-twist."""
    n = g.n
    rows: List[Dict[int, Scalar]] = []
    for i in range(1, n + 1):
        form: Dict[int, Scalar] = {}
        for j in range(1, n + 1):
            e = g.entries[i - 1][j - 1]
            if e.a:
                form[sym_z(j)] = form.get(sym_z(j), Scalar.zero()) + e.a
            if e.b:
                form[sym_zbar(j)] = form.get(sym_zbar(j),
                                             Scalar.zero()) + e.b
        rows.append({s: c for s, c in form.items() if c})
        # conjugate row
        rows.append({sym_conj(s): c.conjugate()
                     for s, c in rows[-1].items()})
    return tuple(rows)


def substitution_from_group(g: REpsMatrix,
                            unimodular: bool = True) -> Substitution:
    """The substitution on (z, zbar) induced by g, with its exact inverse
    from the finite Neumann series."""
    g_inv = group_inverse(g)
    sub = Substitution(g.n, _rows_from_matrix(g), _rows_from_matrix(g_inv),
                       unimodular)
    if not sub.check_reality():
        raise ValueError("substitution violates the reality constraint")
    return sub


def substitute_poly(p: Poly, rows: Sequence[Dict[int, Scalar]],
                    width: int) -> Poly:
    """Apply the linear substitution to every symbol of a polynomial."""
    out: Poly = {}
    for mono, c in p.items():
        term: Poly = {tuple([0] * width): c}
        for s, e in enumerate(mono):
            if e:
                term = poly_mul(term, poly_pow(poly_linear(rows[s], width),
                                               e, width))
        for m, cc in term.items():
            prev = out.get(m)
            out[m] = cc if prev is None else prev + cc
    return {m: c for m, c in out.items() if c}


def conjugate_op(d: WeylOp, s: Substitution) -> WeylOp:
    """The transformed operator g.D with (g.D)(f) = g.(D(g^-1.f)).

    Coefficients substitute through the inverse map; derivative symbols
    transform by the transpose of the forward map (chain rule).
    """
    n = d.n
    width = 2 * n
    if s.n != n:
        raise ValueError("dimension mismatch")
    # columns of the forward map: which rows mention symbol t
    cols: List[Dict[int, Scalar]] = [{} for _ in range(width)]
    for r in range(width):
        for t, c in s.fwd[r].items():
            cols[t][r] = c
    acc: Dict[Tuple[Expo, Expo], Scalar] = {}
    for (mono, deriv), c in d.terms.items():
        coeff_poly = substitute_poly({mono: c}, s.inv, width)
        # transformed derivative block: product over symbols of
        # (sum_r F[r][t] d_r)^deriv[t]
        deriv_poly: Poly = {tuple([0] * width): Scalar.one()}
        for t, e in enumerate(deriv):
            if e:
                deriv_poly = poly_mul(
                    deriv_poly,
                    poly_pow(poly_linear(cols[t], width), e, width))
        for pm, pc in coeff_poly.items():
            for dm, dc in deriv_poly.items():
                key = (pm, dm)
                val = pc * dc
                prev = acc.get(key)
                acc[key] = val if prev is None else prev + val
    return WeylOp(n, acc)
