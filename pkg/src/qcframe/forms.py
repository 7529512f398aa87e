"""Canonical-form exterior algebra over the coframe generators.

A FormExpr is a sum of wedge monomials in the coframe generators with
coefficients that are polynomials in named scalar symbols (curvature
components and their first-derivative families) over the Gaussian
rationals.  Everything is kept in a canonical shape at all times:

* wedge monomials are strictly increasing in the fixed generator order
  of :mod:`qcframe.coframe`, with the sign of the sorting permutation
  absorbed into the coefficient;
* symbols of totally symmetric families store sorted index tuples;
* conjugates of j-real families (S, L) and of the real scalar R are
  rewritten into unconjugated symbols at construction, so each scalar
  function has exactly one name.

Zero detection is therefore trivial: a form is zero iff it has no terms.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple, Union

from .gauss import GaussRational, gr
from .tensors import StandardConstants
from . import coframe

# family -> (arity, totally symmetric, j-real, real scalar)
FAMILIES: Dict[str, Tuple[int, bool, bool, bool]] = {
    "S": (4, True, True, False),
    "V": (3, True, False, False),
    "L": (2, True, True, False),
    "M": (2, True, False, False),
    "C": (1, False, False, False),
    "H": (1, False, False, False),
    "P": (0, False, False, False),
    "Q": (0, False, False, False),
    "R": (0, False, False, True),
    # first-derivative families, namespaced with a leading "s"
    "sA": (5, True, False, False),
    "sB": (4, True, False, False),
    "sC": (4, True, False, False),
    "sD": (3, True, False, False),
    "sE": (3, True, False, False),
    "sF": (3, True, False, False),
    "sG": (2, True, False, False),
    "sX": (2, True, False, False),
    "sY": (2, True, False, False),
    "sZ": (2, True, False, False),
    "sN1": (1, False, False, False),
    "sN2": (1, False, False, False),
    "sN3": (1, False, False, False),
    "sN4": (1, False, False, False),
    "sN5": (1, False, False, False),
    "sU1": (0, False, False, False),
    "sU2": (0, False, False, False),
    "sU3": (0, False, False, False),
    "sW1": (0, False, False, False),
    "sW2": (0, False, False, False),
    "sW3": (0, False, False, False),
    # deliberately unsymmetrized families, used only by negative controls
    "Vns": (3, False, False, False),
    "Sns": (4, False, False, False),
}

CURVATURE_FAMILIES = ("S", "V", "L", "M", "C", "H", "P", "Q", "R")


class Sym(NamedTuple):
    family: str
    idx: Tuple[int, ...]
    conj: bool

    def __repr__(self):
        bar = "~" if self.conj else ""
        ix = "".join(str(i) for i in self.idx)
        return f"{bar}{self.family}{ix}"


Mono = Tuple[Sym, ...]


class Poly:
    """Sparse polynomial in scalar symbols with GaussRational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Mono, GaussRational]] = None):
        self.terms: Dict[Mono, GaussRational] = {}
        if terms:
            for m, c in terms.items():
                if not c.is_zero():
                    self.terms[m] = c

    @staticmethod
    def const(c) -> "Poly":
        c = GaussRational.of(c)
        return Poly({(): c}) if not c.is_zero() else Poly()

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            cur = out.get(m)
            nc = c if cur is None else cur + c
            if nc.is_zero():
                out.pop(m, None)
            else:
                out[m] = nc
        res = Poly()
        res.terms = out
        return res

    def __neg__(self) -> "Poly":
        return self.scale(gr(-1))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, c) -> "Poly":
        c = GaussRational.of(c)
        if c.is_zero():
            return Poly()
        res = Poly()
        res.terms = {m: c * v for m, v in self.terms.items()}
        return res

    def __mul__(self, other: "Poly") -> "Poly":
        out: Dict[Mono, GaussRational] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                c = c1 * c2
                cur = out.get(m)
                nc = c if cur is None else cur + c
                if nc.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = nc
        res = Poly()
        res.terms = out
        return res

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            mono = "*".join(repr(s) for s in m) if m else ""
            bits.append(f"{c!r}{'*' if mono else ''}{mono}")
        return " + ".join(bits)


class Exterior:
    """The exterior algebra on the coframe generators for fixed n."""

    def __init__(self, n: int, signature: Tuple[int, int] = None):
        self.n = n
        self.consts = StandardConstants(n, signature)
        self.keys = coframe.coord_keys(n)
        self.gid = {k: i for i, k in enumerate(self.keys)}
        # conjugation action on generators: gid -> (coefficient, gid)
        self._conj_gen = {}
        for k in self.keys:
            coeff, k2 = coframe.conj_key(self.consts, k)
            self._conj_gen[self.gid[k]] = (coeff, self.gid[k2])

    # -- symbols -----------------------------------------------------------

    def sym(self, family: str, idx: Iterable[int] = (), conj: bool = False) -> Poly:
        """Canonicalized one-symbol polynomial (may fold in a sign)."""
        idx = tuple(idx)
        if family not in FAMILIES:
            raise KeyError(f"unknown symbol family {family!r}")
        arity, symmetric, jreal, real = FAMILIES[family]
        if len(idx) != arity:
            raise ValueError(f"{family} takes {arity} indices, got {idx}")
        if any(not 1 <= i <= 2 * self.n for i in idx):
            raise ValueError(f"index out of range in {family}{idx}")
        coeff = gr(1)
        if symmetric:
            idx = tuple(sorted(idx))
        if conj and real:
            conj = False
        if conj and jreal:
            # jF = F forces conj(F)[b] = F[p(b)] / prod m_{p(b_k)}
            c = self.consts
            target = tuple(c.partner(i) for i in idx)
            for t in target:
                coeff = coeff / c.pi_ubar_l(c.partner(t), t)
            idx = tuple(sorted(target))
            conj = False
        return Poly({(Sym(family, idx, conj),): coeff})

    def jsym(self, family: str, idx: Iterable[int]) -> Poly:
        """(jF)_{idx}: pi-contracted conjugate of the family array."""
        c = self.consts
        idx = tuple(idx)
        coeff = gr(1)
        for a in idx:
            coeff = coeff * c.pi_ubar_l(c.partner(a), a)
        return self.sym(family, tuple(c.partner(a) for a in idx), conj=True).scale(coeff)

    def conj_poly(self, p: Poly) -> Poly:
        out = Poly()
        for mono, c in p.terms.items():
            factor = Poly.const(c.conj())
            for s in mono:
                if s.conj:
                    piece = self.sym(s.family, s.idx, conj=False)
                else:
                    piece = self.sym(s.family, s.idx, conj=True)
                factor = factor * piece
            out = out + factor
        return out

    # -- forms -------------------------------------------------------------

    def zero(self) -> "Form":
        return Form(self, {})

    def scalar(self, p: Union[Poly, GaussRational, int, Fraction]) -> "Form":
        if not isinstance(p, Poly):
            p = Poly.const(p)
        return Form(self, {(): p} if not p.is_zero() else {})

    def gen(self, key: coframe.Key) -> "Form":
        """Degree-1 generator as a form."""
        if key[0] == "Gam":
            key = coframe.gam_key(key[1], key[2])
        return Form(self, {(self.gid[key],): Poly.const(1)})

    def gam_bar_gen(self, s: int, t: int) -> "Form":
        """The dependent generator Gamma_{s̄ t̄} as a signed unbarred one."""
        coeff, key = coframe.gamma_bar(self.consts, s, t)
        return self.gen(key).scale(coeff)


def _merge_sign(m1: Tuple[int, ...], m2: Tuple[int, ...]):
    """Merge two strictly increasing tuples; return (sign, merged) or
    None if a generator repeats."""
    out: List[int] = []
    sign = 1
    i = j = 0
    while i < len(m1) and j < len(m2):
        a, b = m1[i], m2[j]
        if a == b:
            return None
        if a < b:
            out.append(a)
            i += 1
        else:
            # b jumps over the remaining len(m1)-i generators of m1
            if (len(m1) - i) % 2:
                sign = -sign
            out.append(b)
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return sign, tuple(out)


class Form:
    """Canonical graded sum of wedge monomials with Poly coefficients."""

    __slots__ = ("ext", "terms")

    def __init__(self, ext: Exterior, terms: Optional[Dict[Tuple[int, ...], Poly]] = None):
        self.ext = ext
        self.terms: Dict[Tuple[int, ...], Poly] = {}
        if terms:
            for m, p in terms.items():
                if not p.is_zero():
                    self.terms[m] = p

    def _put(self, mono: Tuple[int, ...], p: Poly) -> None:
        cur = self.terms.get(mono)
        np = p if cur is None else cur + p
        if np.is_zero():
            self.terms.pop(mono, None)
        else:
            self.terms[mono] = np

    def __add__(self, other: "Form") -> "Form":
        out = Form(self.ext, dict(self.terms))
        for m, p in other.terms.items():
            out._put(m, p)
        return out

    def __neg__(self) -> "Form":
        return self.scale(gr(-1))

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        if isinstance(c, Poly):
            out = Form(self.ext)
            for m, p in self.terms.items():
                out._put(m, p * c)
            return out
        c = GaussRational.of(c)
        out = Form(self.ext)
        if c.is_zero():
            return out
        for m, p in self.terms.items():
            out.terms[m] = p.scale(c)
        return out

    def wedge(self, other: "Form") -> "Form":
        out = Form(self.ext)
        for m1, p1 in self.terms.items():
            for m2, p2 in other.terms.items():
                merged = _merge_sign(m1, m2)
                if merged is None:
                    continue
                sign, mono = merged
                p = p1 * p2
                if sign < 0:
                    p = p.scale(gr(-1))
                out._put(mono, p)
        return out

    def __xor__(self, other: "Form") -> "Form":  # a ^ b reads as a wedge b
        return self.wedge(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, Form) and self.ext is other.ext
                and self.terms == other.terms)

    def degree_part(self, d: int) -> "Form":
        return Form(self.ext, {m: p for m, p in self.terms.items() if len(m) == d})

    def degrees(self):
        return sorted({len(m) for m in self.terms})

    def term_count(self) -> int:
        return sum(len(p.terms) for p in self.terms.values())

    def conj(self) -> "Form":
        ext = self.ext
        out = Form(ext)
        for mono, p in self.terms.items():
            coeff = gr(1)
            gens: List[int] = []
            for g in mono:
                c, g2 = ext._conj_gen[g]
                coeff = coeff * c
                gens.append(g2)
            # re-sort the (possibly unordered) conjugated generators
            piece = Form(ext, {(): ext.conj_poly(p).scale(coeff)})
            for g in gens:
                piece = piece.wedge(Form(ext, {(g,): Poly.const(1)}))
            out = out + piece
        return out

    def substitute(self, mapping: Dict[Sym, Poly]) -> "Form":
        """Homomorphic replacement of symbols.  Conjugated symbols pick
        up the conjugate of the mapped value automatically."""
        ext = self.ext
        out = Form(ext)
        for mono, p in self.terms.items():
            newp = Poly()
            for smono, c in p.terms.items():
                factor = Poly.const(c)
                for s in smono:
                    if s in mapping:
                        val = mapping[s]
                    elif s.conj and Sym(s.family, s.idx, False) in mapping:
                        val = ext.conj_poly(mapping[Sym(s.family, s.idx, False)])
                    else:
                        val = Poly({(s,): gr(1)})
                    factor = factor * val
                newp = newp + factor
            out._put(mono, newp)
        return out

    def to_text(self) -> str:
        """Deterministic textual serialization in canonical order."""
        if not self.terms:
            return "0"
        lines = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            gens = "^".join(coframe.label(self.ext.keys[g]) for g in mono) or "1"
            lines.append(f"({self.terms[mono]!r}) {gens}")
        return "\n".join(lines)

    def __repr__(self):
        return f"Form({self.term_count()} terms, degrees {self.degrees()})"


class DRuleSet:
    """Exterior-derivative rules: one 2-form per generator, one 1-form
    per scalar symbol family (curved mode only)."""

    def __init__(self, ext: Exterior, mode: str,
                 gen_rules: Dict[int, Form],
                 sym_rules: Optional[Callable[[Sym], Form]] = None):
        if mode not in ("flat", "curved"):
            raise ValueError(f"mode must be flat or curved, not {mode!r}")
        self.ext = ext
        self.mode = mode
        self.gen_rules = gen_rules
        self._sym_rules = sym_rules
        self._sym_cache: Dict[Sym, Form] = {}

    def gen_rule(self, g: int) -> Form:
        try:
            return self.gen_rules[g]
        except KeyError:
            raise KeyError(
                f"no differential rule for generator {coframe.label(self.ext.keys[g])}")

    def sym_rule(self, s: Sym) -> Form:
        if s in self._sym_cache:
            return self._sym_cache[s]
        if self._sym_rules is None:
            raise KeyError(f"no differential rule for symbol family {s.family!r}")
        if s.conj:
            base = self.sym_rule(Sym(s.family, s.idx, False))
            out = base.conj()
        else:
            out = self._sym_rules(s)
        self._sym_cache[s] = out
        return out


def differential(x: Form, rules: DRuleSet) -> Form:
    """Graded-Leibniz exterior derivative of a canonical form."""
    ext = x.ext
    out = Form(ext)
    unit = Poly.const(1)
    for mono, p in x.terms.items():
        # derivative of the coefficient polynomial
        dp = Form(ext)
        for smono, c in p.terms.items():
            for k, s in enumerate(smono):
                rest = Poly({smono[:k] + smono[k + 1:]: c})
                dp = dp + rules.sym_rule(s).scale(rest)
        if dp.terms:
            out = out + dp.wedge(Form(ext, {mono: unit}))
        # Leibniz over the generators of the monomial
        for i, g in enumerate(mono):
            sign = gr(-1 if i % 2 else 1)
            lead = Form(ext, {mono[:i]: p.scale(sign)})
            tail = Form(ext, {mono[i + 1:]: unit})
            out = out + lead.wedge(rules.gen_rule(g)).wedge(tail)
    return out
