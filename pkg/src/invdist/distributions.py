"""Canonical delta-supported distribution expressions.

A term is  coeff * z^p zbar^q * prod_j (z_j zbar_j)^sigma_j * delta-block,
where the delta block is a product over a variable set S of mixed
derivatives  d^a/dz_k^a d^b/dzbar_k^b  applied to the two-real-variable
delta at z_k = 0.  The rewrite rules

    z_k * (d^a dbar^b delta_k) -> -a * (d^(a-1) dbar^b delta_k)
    zbar_k * (d^a dbar^b delta_k) -> -b * (d^a dbar^(b-1) delta_k)

(zero when the order is exhausted) are applied exhaustively, monomial
factors shared between z_j and zbar_j are folded into the power factor,
and terms are merged under a fixed total order, giving a unique canonical
form.  Equality of canonical forms is the equality notion everywhere.

The jet-pairing convention: <d^a dbar^b delta_k, z_k^p zbar_k^q> equals
(-1)^(a+b) a! b! when (p, q) == (a, b) and 0 otherwise.  (The conventional
overall constant of the underlying two-variable delta is dropped; every
identity verified here is linear, so it is immaterial.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalars import AffineExponent, Scalar, generalized_binomial, \
    rank_over_function_field
from .weyl import Expo, Poly, Substitution, WeylOp, conjugate_op, poly_linear, \
    poly_mul, poly_pow, sym_conj, sym_z, sym_zbar, sym_name

__all__ = [
    "DistExpr",
    "UnsupportedSubstitutionError",
    "SupportDescriptor",
    "independence_rank",
]

Powers = Tuple[Tuple[int, AffineExponent], ...]
Delta = Tuple[Tuple[int, int, int], ...]
TermKey = Tuple[Expo, Powers, Delta]


class UnsupportedSubstitutionError(ValueError):
    """A group action hit a substitution outside the supported shape."""


@dataclass
class RawTerm:
    """Mutable scratch term used during rewriting."""

    mono: List[int]
    powers: Dict[int, AffineExponent]
    delta: Dict[int, Tuple[int, int]]
    coeff: Scalar

    def copy(self) -> "RawTerm":
        return RawTerm(list(self.mono), dict(self.powers),
                       dict(self.delta), self.coeff)


def _canonical_key(t: RawTerm) -> Optional[Tuple[TermKey, Scalar]]:
    """Normalize one raw term to (key, coefficient); None when it rewrites
    to zero."""
    mono = list(t.mono)
    coeff = t.coeff
    delta: Dict[int, Tuple[int, int]] = dict(t.delta)
    powers: Dict[int, AffineExponent] = {}
    for j, sigma in t.powers.items():
        if j in delta:
            raise UnsupportedSubstitutionError(
                f"power factor on delta variable z{j}")
        if not sigma.is_zero():
            powers[j] = powers.get(j, AffineExponent()) + sigma
    # delta variables absorb their monomial factors
    for k, (alpha, beta) in list(delta.items()):
        p, q = mono[sym_z(k)], mono[sym_zbar(k)]
        if p > alpha or q > beta:
            return None
        if p or q:
            f = 1
            for step in range(p):
                f *= alpha - step
            for step in range(q):
                f *= beta - step
            if (p + q) % 2:
                f = -f
            coeff = coeff * Scalar.of(f)
            mono[sym_z(k)] = 0
            mono[sym_zbar(k)] = 0
            delta[k] = (alpha - p, beta - q)
    # fold shared monomial exponents into the power factor, and convert
    # nonnegative-integer power factors back to monomials
    for j in list(powers):
        sigma = powers[j]
        m = min(mono[sym_z(j)], mono[sym_zbar(j)])
        if m:
            sigma = sigma + m
            mono[sym_z(j)] -= m
            mono[sym_zbar(j)] -= m
        if sigma.is_integer() and sigma.r >= 0:
            e = int(sigma.r)
            mono[sym_z(j)] += e
            mono[sym_zbar(j)] += e
            del powers[j]
        elif sigma.is_zero():
            del powers[j]
        else:
            powers[j] = sigma
    if not coeff:
        return None
    return ((tuple(mono),
             tuple(sorted(powers.items())),
             tuple(sorted((k, a, b) for k, (a, b) in delta.items()))),
            coeff)


class DistExpr:
    """Canonical sum of distribution terms, optionally with a factored
    form (operator^power applied to a base expression)."""

    __slots__ = ("n", "terms", "factored")

    def __init__(self, n: int, terms: Dict[TermKey, Scalar] | None = None,
                 factored: Optional[Tuple[WeylOp, int, "DistExpr"]] = None):
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c}
        self.factored = factored

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(n: int) -> "DistExpr":
        return DistExpr(n)

    @staticmethod
    def from_raw(n: int, raws: Iterable[RawTerm],
                 factored=None) -> "DistExpr":
        acc: Dict[TermKey, Scalar] = {}
        for t in raws:
            if not t.coeff:
                continue
            normalized = _canonical_key(t)
            if normalized is None:
                continue
            key, coeff = normalized
            prev = acc.get(key)
            acc[key] = coeff if prev is None else prev + coeff
        return DistExpr(n, acc, factored)

    @staticmethod
    def single(n: int, coeff: Scalar = Scalar.one(),
               mono: Dict[int, int] | None = None,
               powers: Dict[int, AffineExponent] | None = None,
               delta: Dict[int, Tuple[int, int]] | None = None,
               factored=None) -> "DistExpr":
        m = [0] * (2 * n)
        for s, e in (mono or {}).items():
            m[s] = e
        return DistExpr.from_raw(
            n, [RawTerm(m, dict(powers or {}), dict(delta or {}), coeff)],
            factored)

    def raw_terms(self) -> List[RawTerm]:
        out = []
        for (mono, powers, delta), coeff in self.terms.items():
            out.append(RawTerm(list(mono), dict(powers),
                               {k: (a, b) for k, a, b in delta}, coeff))
        return out

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "DistExpr") -> "DistExpr":
        acc = dict(self.terms)
        for k, c in other.terms.items():
            prev = acc.get(k)
            acc[k] = c if prev is None else prev + c
        return DistExpr(self.n, acc)

    def __sub__(self, other: "DistExpr") -> "DistExpr":
        return self + other.scale(Scalar.of(-1))

    def scale(self, c: Scalar) -> "DistExpr":
        return DistExpr(self.n, {k: c * v for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, DistExpr) and self.n == other.n
                and self.terms == other.terms)

    def without_factored(self) -> "DistExpr":
        return DistExpr(self.n, self.terms)

    # -- differential operators -------------------------------------------

    def _derive_term(self, t: RawTerm, s: int) -> List[RawTerm]:
        """Single derivative d/d(symbol s) of one term, by Leibniz."""
        j = s // 2 + 1
        out = []
        e = t.mono[s]
        if e:
            nt = t.copy()
            nt.mono[s] = e - 1
            nt.coeff = nt.coeff * Scalar.of(e)
            out.append(nt)
        if j in t.powers:
            sigma = t.powers[j]
            nt = t.copy()
            nt.coeff = nt.coeff * sigma.as_scalar()
            nt.powers[j] = sigma - 1
            nt.mono[sym_conj(s)] += 1
            out.append(nt)
        if j in t.delta:
            a, b = t.delta[j]
            nt = t.copy()
            nt.delta[j] = (a + 1, b) if s % 2 == 0 else (a, b + 1)
            out.append(nt)
        return out

    def apply_weyl(self, op: WeylOp) -> "DistExpr":
        """Normal-ordered operator applied by Leibniz differentiation."""
        if op.n != self.n:
            raise ValueError("dimension mismatch")
        width = 2 * self.n
        raws: List[RawTerm] = []
        for (mono, deriv), c in op.terms.items():
            current = self.raw_terms()
            for s in range(width):
                for _ in range(deriv[s]):
                    nxt: List[RawTerm] = []
                    for t in current:
                        nxt.extend(self._derive_term(t, s))
                    current = nxt
            for t in current:
                t.coeff = t.coeff * c
                for s in range(width):
                    t.mono[s] += mono[s]
            raws.extend(current)
        return DistExpr.from_raw(self.n, raws)

    # -- group action -----------------------------------------------------

    def act_group(self, sub: Substitution) -> "DistExpr":
        """Pullback of the expression along the substitution (the group
        action on distributions; no Jacobian factor by unimodularity)."""
        if not sub.unimodular:
            raise UnsupportedSubstitutionError(
                "action requires a unimodular substitution")
        if self.factored is not None:
            op, power, base = self.factored
            moved = conjugate_op(op, sub) ** power
            return base.act_group(sub).apply_weyl(moved)
        width = 2 * self.n
        raws: List[RawTerm] = []
        for t in self.raw_terms():
            raws.extend(self._act_term(t, sub, width))
        return DistExpr.from_raw(self.n, raws)

    def _act_term(self, t: RawTerm, sub: Substitution,
                  width: int) -> List[RawTerm]:
        dset = set(t.delta)
        dsyms = {s for k in dset for s in (sym_z(k), sym_zbar(k))}
        # -- delta block: triangular with unit-modulus diagonal ------------
        diag: Dict[int, Scalar] = {}
        for k in sorted(dset):
            row = sub.inv[sym_z(k)]
            for s in row:
                kk = s // 2 + 1
                if kk not in dset or (kk == k and s != sym_z(k)):
                    raise UnsupportedSubstitutionError(
                        f"delta variable z{k} maps outside the supported "
                        f"triangular shape (hits {sym_name(s)})")
                if kk < k:
                    raise UnsupportedSubstitutionError(
                        f"delta variable z{k} maps to lower index z{kk}")
            c = row.get(sym_z(k), Scalar.zero())
            if c * c.conjugate() != Scalar.one():
                raise UnsupportedSubstitutionError(
                    f"delta variable z{k} has non-unit diagonal ({c})")
            diag[k] = c
            for s in sub.fwd[sym_z(k)]:
                if s // 2 + 1 not in dset:
                    raise UnsupportedSubstitutionError(
                        f"forward image of delta variable z{k} leaves the "
                        "delta block")
        delta_sum = self._transform_delta(t.delta, sub)
        # -- monomial part -------------------------------------------------
        poly: Poly = {tuple([0] * width): Scalar.one()}
        for s, e in enumerate(t.mono):
            if e:
                poly = poly_mul(poly, poly_pow(
                    poly_linear(sub.inv[s], width), e, width))
        # -- power factors: jet expansion up to the delta order ------------
        jet_order = sum(a + b for a, b in t.delta.values())
        partials: List[Tuple[Scalar, Poly, Dict[int, AffineExponent]]] = [
            (Scalar.one(), {tuple([0] * width): Scalar.one()}, {})]
        for j, sigma in t.powers.items():
            row = sub.inv[sym_z(j)]
            c = row.get(sym_z(j), Scalar.zero())
            for s in row:
                if s != sym_z(j) and s not in dsyms:
                    raise UnsupportedSubstitutionError(
                        f"power-factor base for z{j} depends on "
                        f"non-delta symbol {sym_name(s)}")
            if c * c.conjugate() != Scalar.one():
                raise UnsupportedSubstitutionError(
                    f"power-factor base for z{j} has non-unit leading "
                    f"coefficient ({c})")
            cbar = c.conjugate()
            w_form = {s: cbar * v for s, v in row.items() if s != sym_z(j)}
            rowbar = sub.inv[sym_zbar(j)]
            wbar_form = {s: c * v for s, v in rowbar.items()
                         if s != sym_zbar(j)}
            w_poly = poly_linear(w_form, width)
            wbar_poly = poly_linear(wbar_form, width)
            expanded = []
            for coeff0, poly0, powers0 in partials:
                wk: Poly = {tuple([0] * width): Scalar.one()}
                for k in range(jet_order + 1):
                    if k:
                        wk = poly_mul(wk, w_poly)
                        if not wk:
                            break
                    wm: Poly = dict(wk)
                    for m in range(jet_order - k + 1):
                        if m:
                            wm = poly_mul(wm, wbar_poly)
                            if not wm:
                                break
                        cc = coeff0 * generalized_binomial(sigma, k) \
                            * generalized_binomial(sigma, m)
                        if not cc:
                            continue
                        extra = [0] * width
                        extra[sym_z(j)] = m
                        extra[sym_zbar(j)] = k
                        pp = poly_mul(wm, {tuple(extra): Scalar.one()})
                        np_ = dict(powers0)
                        np_[j] = sigma - k - m
                        expanded.append((cc, poly_mul(poly0, pp), np_))
            partials = expanded
        # -- combine -------------------------------------------------------
        out: List[RawTerm] = []
        for mono_sub, c_sub in poly.items():
            for c_part, poly_part, powers_part in partials:
                for pm, pc in poly_part.items():
                    for dkey, dcoeff in delta_sum.items():
                        mono = [a + b for a, b in zip(mono_sub, pm)]
                        coeff = t.coeff * c_sub * c_part * pc * dcoeff
                        if not coeff:
                            continue
                        out.append(RawTerm(
                            mono, dict(powers_part),
                            {k: (a, b) for k, a, b in dkey}, coeff))
        return out

    def _transform_delta(self, delta: Dict[int, Tuple[int, int]],
                         sub: Substitution) -> Dict[Delta, Scalar]:
        """Pull the derivative block through the linear map restricted to
        the delta variables: d_j goes to sum_k F[k][j] d_k with F the
        forward map, and the underived block is fixed (unit determinant)."""
        base: Dict[Delta, Scalar] = {
            tuple(sorted((k, 0, 0) for k in delta)): Scalar.one()}
        for k, (alpha, beta) in delta.items():
            for s, count in ((sym_z(k), alpha), (sym_zbar(k), beta)):
                col: Dict[int, Scalar] = {}
                for r in delta:
                    for rs in (sym_z(r), sym_zbar(r)):
                        cc = sub.fwd[rs].get(s)
                        if cc:
                            col[rs] = cc
                for _ in range(count):
                    nxt: Dict[Delta, Scalar] = {}
                    for dkey, dc in base.items():
                        orders = {kk: (a, b) for kk, a, b in dkey}
                        for rs, cc in col.items():
                            kk = rs // 2 + 1
                            a, b = orders[kk]
                            orders2 = dict(orders)
                            orders2[kk] = (a + 1, b) if rs % 2 == 0 \
                                else (a, b + 1)
                            key2 = tuple(sorted(
                                (m, x, y) for m, (x, y) in orders2.items()))
                            val = dc * cc
                            prev = nxt.get(key2)
                            nxt[key2] = val if prev is None else prev + val
                    base = {kk: vv for kk, vv in nxt.items() if vv}
        return base

    # -- gradings ----------------------------------------------------------

    def term_degrees(self) -> List[AffineExponent]:
        out = []
        for (mono, powers, delta), _ in self.terms.items():
            d = AffineExponent.of(sum(mono))
            for _, sigma in powers:
                d = d + sigma + sigma
            for _, a, b in delta:
                d = d - (2 + a + b)
            out.append(d)
        return out

    def degree(self) -> Optional[AffineExponent]:
        """The common homogeneity degree, or None when inhomogeneous."""
        degs = set(self.term_degrees())
        if len(degs) == 1:
            return degs.pop()
        return None

    def parity(self) -> str:
        seen = set()
        for (mono, _powers, delta), _ in self.terms.items():
            p = sum(mono) + sum(a + b for _, a, b in delta)
            seen.add(p % 2)
        if not seen or seen == {0}:
            return "even"
        if seen == {1}:
            return "odd"
        return "mixed"

    def u1_weights(self) -> set:
        """The set of phase weights across terms; all-zero weight is
        equivalent to invariance under every diagonal phase."""
        out = set()
        for (mono, _powers, delta), _ in self.terms.items():
            w = sum(mono[s] if s % 2 == 0 else -mono[s]
                    for s in range(len(mono)))
            w -= sum(a - b for _, a, b in delta)
            out.add(w)
        return out

    # -- support -----------------------------------------------------------

    def formal_support(self) -> "SupportDescriptor":
        if self.is_zero():
            raise ValueError("zero expression has empty support")
        dsets = {tuple(k for k, _, _ in delta)
                 for (_, _, delta) in self.terms}
        if len(dsets) != 1:
            raise ValueError("mixed delta-variable sets")
        S = frozenset(dsets.pop())
        j = 0
        for (mono, powers, _delta) in self.terms:
            for jj, _ in powers:
                j = max(j, jj)
            for s, e in enumerate(mono):
                if e and (s // 2 + 1) not in S:
                    j = max(j, s // 2 + 1)
        stratum = None
        if S == frozenset(range(j + 1, self.n + 1)):
            stratum = j
        return SupportDescriptor(S, j, stratum)

    # -- display -----------------------------------------------------------

    def canonical_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms, key=_term_sort_key):
            mono, powers, delta = key
            c = self.terms[key]
            factors = [f"({c})"]
            for s, e in enumerate(mono):
                if e:
                    factors.append(sym_name(s) + (f"^{e}" if e > 1 else ""))
            for j, sigma in powers:
                factors.append(f"(z{j}*zbar{j})^({sigma})")
            for k, a, b in delta:
                factors.append(f"delta{k}[{a},{b}]")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.canonical_str()

    __repr__ = __str__


def _term_sort_key(key: TermKey):
    mono, powers, delta = key
    return (delta, tuple((j, sigma.r, sigma.s) for j, sigma in powers), mono)


@dataclass(frozen=True)
class SupportDescriptor:
    """Delta-variable set S, leading free index j, and the stratum-closure
    label when S = {j+1, ..., n} (the support is then the closure of the
    (2j-1)-dimensional stratum)."""

    delta_vars: frozenset
    leading_index: int
    stratum: Optional[int]

    def label(self) -> str:
        return f"X{self.stratum}" if self.stratum is not None else "irregular"


# ---------------------------------------------------------------------------
# Linear independence over the lam-function field
# ---------------------------------------------------------------------------

def independence_rank(family: Sequence[DistExpr]) -> int:
    """Rank of the family's coefficient matrix over all distinct basis
    terms, computed exactly over the field of rational functions in lam."""
    keys = sorted({k for e in family for k in e.terms}, key=_term_sort_key)
    matrix = [[e.terms.get(k, Scalar.zero()) for k in keys] for e in family]
    if not keys:
        return 0
    return rank_over_function_field(matrix)
