"""Exact arithmetic in the localized Grothendieck-ring fragment Z[L, L^-1, (L^a-1)^-1].

A :class:`MotClass` is a finite sum of terms, each term being a canonical
fraction in the Lefschetz symbol ``L`` times a monomial in registered
stratum symbols.  Denominators are tracked through their cyclotomic
factorization (each L^a - 1 splitting as prod_{d|a} Phi_d(L)), so equality
is structural and no polynomial gcd is ever needed for comparisons.

Realizations:

* ``poincare`` -- the ring morphism L |-> t^2, valued in truncated Laurent
  series in t (and, exactly, in rational functions of t);
* ``count_realize`` -- the point-count morphism L |-> q;
* ``dim_nu`` -- half the top degree and the leading coefficient of the
  Poincare realization, adopted here as the definition of dimension and
  of the number of top-dimensional components;
* ``effectivity_certificate`` -- a one-sided sufficient check that a class
  is a nonnegative combination after clearing a denominator from the
  multiplicative set generated by L and the L^a - 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .polyops import IntPoly, ONE, cyclotomic, cyclotomic_split


class MotError(ValueError):
    """Invalid input to the motivic-class layer (bad denominator, non-unit...)."""


MINUS_INFINITY = float("-inf")

# A symbol monomial is a sorted tuple of (name, exponent>0) pairs.
SymMonomial = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class LFrac:
    """Canonical fraction c * num(L) * L^(-lpow) / prod Phi_d(L)^cyc[d].

    ``num`` is primitive with positive leading coefficient and nonzero
    constant term; ``content`` carries the integer content and the sign;
    ``lpow`` may be negative (a net positive power of L).  ``num`` shares
    no cyclotomic factor with the denominator.
    """

    content: int
    num: IntPoly
    lpow: int
    cyc: tuple[tuple[int, int], ...]

    def is_zero(self) -> bool:
        return self.content == 0


LFRAC_ZERO = LFrac(0, ONE, 0, ())
LFRAC_ONE = LFrac(1, ONE, 0, ())


def _lfrac_make(content: int, num: IntPoly, lpow: int,
                cyc: Mapping[int, int]) -> LFrac:
    """Canonicalize raw fraction data into an LFrac."""
    if content == 0 or num.is_zero():
        return LFRAC_ZERO
    v = num.valuation()
    if v:
        num = num.shift(-v)
        lpow -= v
    c = num.content()
    if num.lead() < 0:
        c = -c
    num = IntPoly(tuple(x // c for x in num.coeffs))
    content *= c
    cyc_out = dict((d, m) for d, m in cyc.items() if m)
    for d in sorted(cyc_out):
        phi = cyclotomic(d)
        while cyc_out.get(d, 0) > 0 and phi.divides(num):
            num = num.exact_div(phi)
            cyc_out[d] -= 1
        if cyc_out.get(d) == 0:
            del cyc_out[d]
    if any(m < 0 for m in cyc_out.values()):
        raise MotError("negative cyclotomic multiplicity")
    return LFrac(content, num, lpow, tuple(sorted(cyc_out.items())))


def _lfrac_add(a: LFrac, b: LFrac) -> LFrac:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    lpow = max(a.lpow, b.lpow)
    cyc: dict[int, int] = {}
    for d, m in a.cyc:
        cyc[d] = max(cyc.get(d, 0), m)
    for d, m in b.cyc:
        cyc[d] = max(cyc.get(d, 0), m)

    def lift(t: LFrac) -> IntPoly:
        poly = t.num.scale(t.content).shift(lpow - t.lpow)
        tc = dict(t.cyc)
        for d, m in cyc.items():
            extra = m - tc.get(d, 0)
            if extra:
                poly = poly * cyclotomic(d) ** extra
        return poly

    return _lfrac_make(1, lift(a) + lift(b), lpow, cyc)


def _lfrac_mul(a: LFrac, b: LFrac) -> LFrac:
    if a.is_zero() or b.is_zero():
        return LFRAC_ZERO
    cyc: dict[int, int] = dict(a.cyc)
    for d, m in b.cyc:
        cyc[d] = cyc.get(d, 0) + m
    return _lfrac_make(a.content * b.content, a.num * b.num,
                       a.lpow + b.lpow, cyc)


class MotClass:
    """Element of the localized ring fragment, with optional stratum symbols.

    Stored as a map from symbol monomials to :class:`LFrac` coefficients;
    the empty monomial keys the pure L-part.  Values are immutable and
    hashable; equality is structural identity of the canonical form.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[SymMonomial, LFrac] | None = None):
        clean = {}
        if terms:
            for mon, frac in terms.items():
                if not frac.is_zero():
                    clean[mon] = frac
        object.__setattr__(self, "terms", tuple(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("MotClass is immutable")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_int(c: int) -> "MotClass":
        return MotClass({(): _lfrac_make(c, ONE, 0, {})})

    @staticmethod
    def from_poly(poly: IntPoly) -> "MotClass":
        return MotClass({(): _lfrac_make(1, poly, 0, {})})

    @staticmethod
    def L_power(k: int) -> "MotClass":
        return MotClass({(): _lfrac_make(1, ONE, -k, {})})

    @staticmethod
    def symbol(name: str) -> "MotClass":
        return MotClass({((name, 1),): LFRAC_ONE})

    # -- structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_pure(self) -> bool:
        """True when no stratum symbol occurs."""
        return all(mon == () for mon, _ in self.terms)

    def symbol_names(self) -> set[str]:
        return {name for mon, _ in self.terms for name, _ in mon}

    def pure_fraction(self) -> LFrac:
        """The single L-fraction of a pure value (error if symbols occur)."""
        if self.is_zero():
            return LFRAC_ZERO
        if not self.is_pure():
            raise MotError("value carries stratum symbols")
        return self.terms[0][1]

    # Spec-facing views of the canonical single-term shape.
    @property
    def numerator(self) -> IntPoly:
        return self.pure_fraction().num

    @property
    def content(self) -> int:
        return self.pure_fraction().content

    @property
    def denom_L_power(self) -> int:
        return self.pure_fraction().lpow

    @property
    def denom_cyclotomic(self) -> tuple[tuple[int, int], ...]:
        return self.pure_fraction().cyc

    @property
    def symbol_factors(self) -> SymMonomial:
        if len(self.terms) != 1:
            raise MotError("symbol_factors needs a single-term value")
        return self.terms[0][0]

    def __eq__(self, other):
        return isinstance(other, MotClass) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"MotClass({render_mot(self)!r})"

    def __str__(self):
        return render_mot(self)

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "MotClass") -> "MotClass":
        out = dict(self.terms)
        for mon, frac in other.terms:
            out[mon] = _lfrac_add(out.get(mon, LFRAC_ZERO), frac)
        return MotClass(out)

    def __neg__(self) -> "MotClass":
        return MotClass({mon: LFrac(-f.content, f.num, f.lpow, f.cyc)
                         for mon, f in self.terms})

    def __sub__(self, other: "MotClass") -> "MotClass":
        return self + (-other)

    def __mul__(self, other: "MotClass") -> "MotClass":
        out: dict[SymMonomial, LFrac] = {}
        for mon_a, fa in self.terms:
            for mon_b, fb in other.terms:
                mon = _merge_monomials(mon_a, mon_b)
                prod = _lfrac_mul(fa, fb)
                out[mon] = _lfrac_add(out.get(mon, LFRAC_ZERO), prod)
        return MotClass(out)

    def __pow__(self, n: int) -> "MotClass":
        if n < 0:
            return inv(self) ** (-n)
        out = MOT_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other: "MotClass") -> "MotClass":
        return self * inv(other)

    # -- unit structure ----------------------------------------------------

    def unit_parts(self) -> tuple[int, int, dict[int, int]] | None:
        """Decompose a unit as (sign, L-power, cyclotomic numerator mults).

        value = sign * L^lpower * prod Phi_d^mult[d] (mult may be negative,
        counting denominator factors).  Returns None when not a unit.
        """
        if self.is_zero() or not self.is_pure() or len(self.terms) != 1:
            return None
        f = self.pure_fraction()
        if abs(f.content) != 1:
            return None
        mults, rest = cyclotomic_split(f.num)
        if rest != ONE:
            return None
        out = dict(mults)
        for d, m in f.cyc:
            out[d] = out.get(d, 0) - m
        return f.content, -f.lpow, {d: m for d, m in out.items() if m}

    def is_unit(self) -> bool:
        return self.unit_parts() is not None


def _merge_monomials(a: SymMonomial, b: SymMonomial) -> SymMonomial:
    out = dict(a)
    for name, e in b:
        out[name] = out.get(name, 0) + e
    return tuple(sorted(out.items()))


MOT_ZERO = MotClass()
MOT_ONE = MotClass.from_int(1)
L = MotClass.L_power(1)


def mot_from_fraction(num: IntPoly, den: IntPoly) -> "MotClass":
    """num/den where den is any product of +/- L-powers and cyclotomics.

    This is the lenient internal constructor (used e.g. for Bezout
    cofactors whose denominators are unit resultants); :func:`normalize`
    is the strict public entry point.
    """
    if den.is_zero():
        raise MotError("zero denominator")
    v = den.valuation()
    den = den.shift(-v)
    c = den.content()
    if den.lead() < 0:
        c = -c
    den = IntPoly(tuple(x // c for x in den.coeffs))
    if abs(c) != 1:
        raise MotError(f"denominator content {c} is not invertible")
    mults, rest = cyclotomic_split(den)
    if rest != ONE:
        raise MotError("denominator has a non-cyclotomic, non-L factor")
    return MotClass({(): _lfrac_make(c, num, v, mults)})


def normalize(num: IntPoly | int, den: IntPoly | int = 1) -> MotClass:
    """Canonicalize a fraction of integer polynomials in L over the monoid S.

    The denominator must be, up to sign, a product of powers of L and of
    polynomials L^a - 1; anything else (even an invertible cyclotomic such
    as L + 1 on its own) is rejected.
    """
    if isinstance(num, int):
        num = IntPoly.const(num)
    if isinstance(den, int):
        den = IntPoly.const(den)
    if den.is_zero():
        raise MotError("zero denominator")
    v = den.valuation()
    stripped = den.shift(-v)
    c = stripped.content()
    if stripped.lead() < 0:
        c = -c
    if abs(c) != 1:
        raise MotError(f"denominator content {c} not in the monoid S")
    stripped = IntPoly(tuple(x // c for x in stripped.coeffs))
    mults, rest = cyclotomic_split(stripped)
    if rest != ONE:
        raise MotError("denominator is not a product of L-powers and L^a-1 factors")
    _check_s_monoid(mults)
    return MotClass({(): _lfrac_make(c, num, v, mults)})


def _check_s_monoid(mults: Mapping[int, int]) -> None:
    """Verify a cyclotomic multiset is a product of full (L^a - 1) groups."""
    left = dict(mults)
    while left:
        a = max(left)
        for e in range(1, a + 1):
            if a % e == 0:
                left[e] = left.get(e, 0) - 1
                if left[e] < 0:
                    raise MotError(
                        "denominator cyclotomic factors do not group into L^a-1 terms")
                if left[e] == 0:
                    del left[e]


def inv(x: MotClass) -> MotClass:
    """Inverse of a unit (+-L-power times cyclotomic factors)."""
    parts = x.unit_parts()
    if parts is None:
        raise MotError(f"not a unit in the localized ring: {render_mot(x)}")
    sign, lpower, mults = parts
    num = ONE
    cyc: dict[int, int] = {}
    for d, m in mults.items():
        if m < 0:
            num = num * cyclotomic(d) ** (-m)
        else:
            cyc[d] = m
    return MotClass({(): _lfrac_make(sign, num, lpower, cyc)})


# -- stratum symbols ------------------------------------------------------


@dataclass
class StratumSymbol:
    """Registered opaque stratum class: name, dimension, realizations."""

    name: str
    dim: int
    poincare: IntPoly
    counts: dict[int, Fraction] = field(default_factory=dict)
    effective: bool = True

    def __post_init__(self):
        if self.poincare.degree != 2 * self.dim or self.poincare.lead() <= 0:
            raise MotError(
                f"symbol {self.name}: Poincare polynomial must have degree "
                f"{2 * self.dim} and positive leading coefficient")


class SymbolRegistry:
    """Name -> StratumSymbol table; freeze before any parallel phase."""

    def __init__(self):
        self._table: dict[str, StratumSymbol] = {}
        self._frozen = False

    def register(self, symbol: StratumSymbol) -> None:
        if self._frozen:
            raise MotError("registry is frozen")
        self._table[symbol.name] = symbol

    def freeze(self) -> None:
        self._frozen = True

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def get(self, name: str) -> StratumSymbol:
        if name not in self._table:
            raise MotError(f"unregistered stratum symbol: {name}")
        return self._table[name]

    def names(self) -> list[str]:
        return sorted(self._table)


EMPTY_REGISTRY = SymbolRegistry()
EMPTY_REGISTRY.freeze()


# -- Poincare realization ----------------------------------------------------


@dataclass(frozen=True)
class PoincareSeries:
    """Truncated Laurent series in t: finitely many terms, floor tracked.

    Coefficients with exponent < floor are unknown (dropped), those >= floor
    are exact.  Addition and multiplication propagate the floor.
    """

    coeffs: tuple[tuple[int, int], ...]
    floor: int

    @staticmethod
    def make(coeffs: Mapping[int, int], floor: int) -> "PoincareSeries":
        kept = {e: c for e, c in coeffs.items() if c and e >= floor}
        return PoincareSeries(tuple(sorted(kept.items())), floor)

    def coefficient(self, e: int) -> int:
        for k, c in self.coeffs:
            if k == e:
                return c
        return 0

    def top(self) -> tuple[int, int] | None:
        """(degree, leading coefficient) of the truncated data, or None."""
        return self.coeffs[-1] if self.coeffs else None

    def __add__(self, other: "PoincareSeries") -> "PoincareSeries":
        floor = max(self.floor, other.floor)
        out: dict[int, int] = dict(self.coeffs)
        for e, c in other.coeffs:
            out[e] = out.get(e, 0) + c
        return PoincareSeries.make(out, floor)

    def __mul__(self, other: "PoincareSeries") -> "PoincareSeries":
        top_a = self.coeffs[-1][0] if self.coeffs else self.floor
        top_b = other.coeffs[-1][0] if other.coeffs else other.floor
        floor = max(self.floor + top_b, other.floor + top_a,
                    self.floor + other.floor)
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                if e1 + e2 >= floor:
                    out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return PoincareSeries.make(out, floor)

    def agrees_with(self, other: "PoincareSeries") -> bool:
        floor = max(self.floor, other.floor)
        keys = {e for e, _ in self.coeffs if e >= floor}
        keys |= {e for e, _ in other.coeffs if e >= floor}
        return all(self.coefficient(e) == other.coefficient(e) for e in keys)

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in reversed(self.coeffs):
            mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
            if e != 0 and abs(c) == 1:
                term = mono if c == 1 else f"-{mono}"
            else:
                term = f"{c}" if e == 0 else f"{c}*{mono}"
            parts.append(term)
        text = " + ".join(parts).replace("+ -", "- ")
        return text


def poincare(x: MotClass, precision: int,
             registry: SymbolRegistry | None = None) -> PoincareSeries:
    """Poincare realization PC(x), truncated below at exponent -2*precision."""
    if precision <= 0:
        raise MotError("precision must be positive")
    registry = registry or EMPTY_REGISTRY
    floor = -2 * precision
    total = PoincareSeries.make({}, floor)
    for mon, frac in x.terms:
        term = PoincareSeries.make(
            {2 * i - 2 * frac.lpow: frac.content * c
             for i, c in enumerate(frac.num.coeffs)}, floor)
        for d, m in frac.cyc:
            inv_phi = _phi_inverse_series(d, floor)
            for _ in range(m):
                term = term * inv_phi
        for name, e in mon:
            pc = registry.get(name).poincare
            sym = PoincareSeries.make(dict(enumerate(pc.coeffs)), floor)
            for _ in range(e):
                term = term * sym
        total = total + term
    return total


def _phi_inverse_series(d: int, floor: int) -> PoincareSeries:
    """1 / Phi_d(t^2) as a Laurent series in descending powers of t."""
    phi = cyclotomic(d).substitute_power(2)
    deg = phi.degree
    # Solve phi * s = 1 for s = sum_{k<=-deg} s_k t^k, descending.
    coeffs: dict[int, int] = {}
    lead = phi.lead()  # cyclotomics are monic
    for e in range(-deg, floor - 1, -1):
        acc = 1 if e + deg == 0 else 0
        for i in range(deg):  # phi[i] * s[e + deg - i], i < deg known so far
            c_phi = phi[i]
            if c_phi:
                acc -= c_phi * coeffs.get(e + deg - i, 0)
        coeffs[e] = acc // lead
    return PoincareSeries.make(coeffs, floor)


def poincare_rational(x: MotClass, registry: SymbolRegistry | None = None
                      ) -> tuple[IntPoly, IntPoly]:
    """PC(x) as an exact rational function (num, den) in t, den monic."""
    registry = registry or EMPTY_REGISTRY
    num_total, den_total = IntPoly(), ONE
    for mon, frac in x.terms:
        num = frac.num.substitute_power(2).scale(frac.content)
        den = ONE
        if frac.lpow > 0:
            den = den * IntPoly.monomial(1, 2 * frac.lpow)
        elif frac.lpow < 0:
            num = num.shift(-2 * frac.lpow)
        for d, m in frac.cyc:
            den = den * cyclotomic(d).substitute_power(2) ** m
        for name, e in mon:
            num = num * registry.get(name).poincare ** e
        num_total = num_total * den + num * den_total
        den_total = den_total * den
    # Cancel common powers of t; deeper cancellation never changes top data.
    v = min(num_total.valuation() if num_total else 0, den_total.valuation())
    if v:
        num_total = num_total.shift(-v)
        den_total = den_total.shift(-v)
    return num_total, den_total


def dim_nu(x: MotClass, registry: SymbolRegistry | None = None
           ) -> tuple[Fraction | float, int]:
    """(dim, nu) from the exact Poincare realization.

    dim is half the top degree of PC(x) (an integer on everything this
    artifact produces; returned exactly), nu its leading coefficient.
    Returns (-inf, 0) for the zero class.
    """
    num, den = poincare_rational(x, registry)
    if num.is_zero():
        return MINUS_INFINITY, 0
    d = Fraction(num.degree - den.degree, 2)
    nu = num.lead()  # den is monic by construction
    if d.denominator == 1:
        return int(d), nu
    return d, nu


def count_realize(x: MotClass, q: int,
                  registry: SymbolRegistry | None = None) -> Fraction:
    """Point-count realization L |-> q; exact rational output."""
    if q < 2:
        raise MotError("q must be at least 2")
    registry = registry or EMPTY_REGISTRY
    total = Fraction(0)
    for mon, frac in x.terms:
        val = Fraction(frac.content) * frac.num.eval_fraction(Fraction(q))
        val /= Fraction(q) ** frac.lpow
        for d, m in frac.cyc:
            val /= Fraction(cyclotomic(d).eval_int(q)) ** m
        for name, e in mon:
            sym = registry.get(name)
            if q not in sym.counts:
                raise MotError(f"symbol {name} has no point count at q={q}")
            val *= sym.counts[q] ** e
        total += val
    return total


# -- effectivity --------------------------------------------------------------


def _nonneg_after_stripping(poly: IntPoly, _seen: set | None = None) -> bool:
    """Can poly be written as (product of L^a - 1 factors) * nonneg poly?"""
    if poly.is_zero():
        return True
    if all(c >= 0 for c in poly.coeffs):
        return True
    if _seen is None:
        _seen = set()
    if poly.coeffs in _seen:
        return False
    _seen.add(poly.coeffs)
    for a in range(1, poly.degree + 1):
        factor = IntPoly.monomial(1, a) - ONE
        if factor.divides(poly):
            if _nonneg_after_stripping(poly.exact_div(factor), _seen):
                return True
    return False


def effectivity_certificate(x: MotClass,
                            registry: SymbolRegistry | None = None) -> bool:
    """One-sided effectivity check: True means certified effective.

    A pure term is certified when, after clearing its S-denominator, the
    numerator splits as a product of (L^a - 1) factors and a polynomial
    with nonnegative coefficients.  Terms with stratum symbols require the
    symbols to be declared effective.  False is *not* a proof of
    non-effectivity.
    """
    registry = registry or EMPTY_REGISTRY
    for mon, frac in x.terms:
        for name, _ in mon:
            if not registry.get(name).effective:
                return False
        if not _nonneg_after_stripping(frac.num.scale(frac.content)):
            return False
    return True


# -- text rendering and parsing ----------------------------------------------


def _render_intpoly(poly: IntPoly, var: str = "L") -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for e in range(poly.degree, -1, -1):
        c = poly[e]
        if not c:
            continue
        if e == 0:
            body = str(abs(c))
        else:
            v = var if e == 1 else f"{var}^{e}"
            body = v if abs(c) == 1 else f"{abs(c)}*{v}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def _render_lfrac(frac: LFrac) -> tuple[str, bool]:
    """Render an LFrac; returns (text, is_composite_sum_or_fraction)."""
    num_poly = frac.num.scale(frac.content)
    if frac.lpow < 0:
        num_poly = num_poly.shift(-frac.lpow)
    den_poly = IntPoly.monomial(1, max(frac.lpow, 0))
    for d, m in frac.cyc:
        den_poly = den_poly * cyclotomic(d) ** m
    num_text = _render_intpoly(num_poly)
    if den_poly == ONE:
        composite = sum(1 for c in num_poly.coeffs if c) > 1
        return num_text, composite
    return f"({num_text})/({_render_intpoly(den_poly)})", False


def render_mot(x: MotClass) -> str:
    """Canonical text form, e.g. ``(L^2 - 1)/(L^2)`` or ``(L - 1)*Delta``."""
    if x.is_zero():
        return "0"
    parts = []
    for mon, frac in x.terms:
        text, composite = _render_lfrac(frac)
        if mon:
            sym_text = "*".join(n if e == 1 else f"{n}^{e}" for n, e in mon)
            if composite:
                text = f"({text})"
            text = sym_text if text == "1" else f"{text}*{sym_text}"
        parts.append(text)
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[()+\-*/^])")


class _Parser:
    """Recursive-descent parser for ring expressions over L and symbols."""

    def __init__(self, text: str, names: Iterable[str], var_hook=None):
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.names = set(names)
        self.var_hook = var_hook  # optional name -> value escape hatch

    @staticmethod
    def _tokenize(text: str) -> list[str]:
        out, pos = [], 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise MotError(f"cannot tokenize {text[pos:]!r}")
                break
            out.append(m.group(1))
            pos = m.end()
        return out

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise MotError("unexpected end of expression")
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        if self.peek() is not None:
            raise MotError(f"trailing input: {self.tokens[self.pos:]}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.power()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                value = value * self.power()
            elif tok == "/":
                self.take()
                value = value / self.power()
            elif tok is not None and (tok.isdigit() or tok == "(" or
                                      tok[0].isalpha()):
                value = value * self.power()  # implicit multiplication
            else:
                return value

    def power(self):
        value = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            exp_tok = self.take()
            if not exp_tok.isdigit():
                raise MotError(f"integer exponent expected, got {exp_tok!r}")
            return value ** (sign * int(exp_tok))
        return value

    def atom(self):
        tok = self.take()
        if tok == "(":
            value = self.expr()
            if self.take() != ")":
                raise MotError("unbalanced parenthesis")
            return value
        if tok == "-":
            return -self.atom()
        if tok == "+":
            return self.atom()
        if tok.isdigit():
            return self.convert_int(int(tok))
        if self.var_hook is not None:
            hooked = self.var_hook(tok)
            if hooked is not None:
                return hooked
        return self.resolve_name(tok)

    # conversion hooks (MotClass by default)
    def convert_int(self, c: int):
        return MotClass.from_int(c)

    def resolve_name(self, tok: str):
        if tok == "L":
            return L
        if tok in self.names:
            return MotClass.symbol(tok)
        raise MotError(f"unknown name {tok!r}")


def parse_mot(text: str, registry: SymbolRegistry | None = None) -> MotClass:
    """Parse the rendering grammar back into a MotClass."""
    registry = registry or EMPTY_REGISTRY
    return _Parser(text, registry.names()).parse()
