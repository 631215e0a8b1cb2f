"""Laurent series and rational functions in T-variables over motivic classes.

A :class:`RationalMotSeries` stores a Laurent-polynomial numerator together
with denominator factors (1 - L^a T^b)^mult.  The module provides the
coefficient expansion, the closed-form resultant of two such binomials with
its Sylvester-determinant oracle, decomposition into partial fractions with
Bezout cofactors built from Sylvester minors, specialization T_alpha ->
T^lambda_alpha, exact evaluation at T = L^-1 on the dagger subring, and the
tauberian extraction of dimension/component asymptotics of coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Mapping, Sequence

from . import grot
from .grot import (MOT_ONE, MOT_ZERO, MINUS_INFINITY, MotClass, MotError,
                   SymbolRegistry, dim_nu, inv, render_mot)
from .polyops import IntPoly, ONE, ZERO, bareiss_det


class SeriesError(ValueError):
    """Invalid rational-series input (proportional factors, non-dagger...)."""


ExpVec = tuple[int, ...]


class LaurentPolyMot:
    """Laurent polynomial over MotClass in a declared tuple of variables."""

    __slots__ = ("variables", "coeffs")

    def __init__(self, variables: Sequence[str],
                 coeffs: Mapping[ExpVec, MotClass] | None = None):
        object.__setattr__(self, "variables", tuple(variables))
        clean = {}
        if coeffs:
            for exps, c in coeffs.items():
                if len(exps) != len(self.variables):
                    raise SeriesError("exponent vector length mismatch")
                if not c.is_zero():
                    clean[tuple(exps)] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolyMot is immutable")

    @staticmethod
    def constant(variables: Sequence[str], c: MotClass) -> "LaurentPolyMot":
        zero = (0,) * len(tuple(variables))
        return LaurentPolyMot(variables, {zero: c})

    @staticmethod
    def monomial(variables: Sequence[str], exps: ExpVec,
                 c: MotClass = MOT_ONE) -> "LaurentPolyMot":
        return LaurentPolyMot(variables, {tuple(exps): c})

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exps: ExpVec) -> MotClass:
        return self.coeffs.get(tuple(exps), MOT_ZERO)

    def __eq__(self, other):
        return (isinstance(other, LaurentPolyMot)
                and self.variables == other.variables
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.coeffs.items(),
                                                  key=lambda kv: kv[0]))))

    def __add__(self, other: "LaurentPolyMot") -> "LaurentPolyMot":
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, MOT_ZERO) + c
        return LaurentPolyMot(self.variables, out)

    def __neg__(self) -> "LaurentPolyMot":
        return LaurentPolyMot(self.variables,
                              {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPolyMot") -> "LaurentPolyMot":
        return self + (-other)

    def __mul__(self, other: "LaurentPolyMot") -> "LaurentPolyMot":
        self._check(other)
        out: dict[ExpVec, MotClass] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, MOT_ZERO) + c1 * c2
        return LaurentPolyMot(self.variables, out)

    def scale(self, c: MotClass) -> "LaurentPolyMot":
        return LaurentPolyMot(self.variables,
                              {e: c * v for e, v in self.coeffs.items()})

    def __pow__(self, n: int) -> "LaurentPolyMot":
        if n < 0:
            return self._inverted() ** (-n)
        out = LaurentPolyMot.constant(self.variables, MOT_ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _inverted(self) -> "LaurentPolyMot":
        if len(self.coeffs) != 1:
            raise SeriesError("only monomials with unit coefficient invert")
        (exps, c), = self.coeffs.items()
        return LaurentPolyMot.monomial(self.variables,
                                       tuple(-e for e in exps), inv(c))

    def __truediv__(self, other: "LaurentPolyMot") -> "LaurentPolyMot":
        return self * other._inverted()

    def _check(self, other: "LaurentPolyMot") -> None:
        if self.variables != other.variables:
            raise SeriesError("variable sets differ")

    # -- single-variable views ------------------------------------------

    def is_single_variable(self) -> bool:
        return len(self.variables) == 1

    def min_degree(self) -> int:
        return min((e[0] for e in self.coeffs), default=0)

    def degree(self) -> int:
        return max((e[0] for e in self.coeffs), default=-1)

    def substitute_monomials(self, weights: Mapping[str, int],
                             var: str = "T") -> "LaurentPolyMot":
        """Map each T_alpha to T^weights[alpha] (single output variable)."""
        out: dict[ExpVec, MotClass] = {}
        for exps, c in self.coeffs.items():
            e = sum(w * weights[v] for w, v in zip(exps, self.variables))
            key = (e,)
            out[key] = out.get(key, MOT_ZERO) + c
        return LaurentPolyMot((var,), out)

    def eval_at_Linv(self) -> MotClass:
        """Substitute every variable by L^-1."""
        total = MOT_ZERO
        for exps, c in self.coeffs.items():
            total = total + c * MotClass.L_power(-sum(exps))
        return total

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for exps, c in self.coeffs.items():
            monos = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    monos.append(v)
                elif e != 0:
                    monos.append(f"{v}^{e}")
            ctext = render_mot(c)
            if monos:
                if " + " in ctext or " - " in ctext or ctext.startswith("-"):
                    ctext = f"({ctext})"
                parts.append("*".join([ctext] + monos) if ctext != "1"
                             else "*".join(monos))
            else:
                parts.append(ctext)
        return " + ".join(parts)


@dataclass(frozen=True)
class Factor:
    """Denominator factor (1 - L^a T^b)^mult with b an exponent vector."""

    a: int
    b: ExpVec
    mult: int = 1

    def __post_init__(self):
        if self.a < 0 or self.mult < 1 or not any(self.b):
            raise SeriesError("factor needs a >= 0, b != 0, mult >= 1")

    @property
    def total_b(self) -> int:
        return sum(self.b)

    def is_dagger(self) -> bool:
        return self.total_b > self.a

    def in_braces_ring(self) -> bool:
        return self.total_b >= self.a

    def as_poly(self, variables: Sequence[str]) -> LaurentPolyMot:
        one = LaurentPolyMot.constant(variables, MOT_ONE)
        mono = LaurentPolyMot.monomial(variables, self.b,
                                       -MotClass.L_power(self.a))
        return one + mono


class RationalMotSeries:
    """numerator / prod (1 - L^a T^b)^mult, expanded as a Laurent series."""

    __slots__ = ("numerator", "factors")

    def __init__(self, numerator: LaurentPolyMot,
                 factors: Sequence[Factor] = ()):
        merged: dict[tuple[int, ExpVec], int] = {}
        for f in factors:
            if len(f.b) != len(numerator.variables):
                raise SeriesError("factor exponent length mismatch")
            key = (f.a, f.b)
            merged[key] = merged.get(key, 0) + f.mult
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "factors", tuple(
            Factor(a, b, m) for (a, b), m in sorted(merged.items())))

    def __setattr__(self, name, value):
        raise AttributeError("RationalMotSeries is immutable")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.numerator.variables

    def is_single_variable(self) -> bool:
        return len(self.variables) == 1

    def dagger(self) -> bool:
        """True when every factor satisfies b > a (evaluable at T = L^-1)."""
        return all(f.is_dagger() for f in self.factors)

    def __eq__(self, other):
        return (isinstance(other, RationalMotSeries)
                and self.numerator == other.numerator
                and self.factors == other.factors)

    def render(self) -> str:
        num = self.numerator.render()
        if not self.factors:
            return num
        dens = []
        for f in self.factors:
            monos = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, f.b) if e != 0)
            base = f"1 - L^{f.a}*{monos}" if f.a != 0 else f"1 - {monos}"
            dens.append(f"({base})" + (f"^{f.mult}" if f.mult > 1 else ""))
        return f"({num}) / ({' '.join(dens)})"

    def clear_factor(self, a: int, b: ExpVec, mult: int) -> "RationalMotSeries":
        """Multiply by (1 - L^a T^b)^mult, cancelling stored factors first."""
        left = mult
        out: list[Factor] = []
        for f in self.factors:
            if f.a == a and f.b == tuple(b) and left > 0:
                use = min(left, f.mult)
                left -= use
                if f.mult - use:
                    out.append(Factor(f.a, f.b, f.mult - use))
            else:
                out.append(f)
        num = self.numerator
        for _ in range(left):
            num = num * Factor(a, tuple(b), 1).as_poly(self.variables)
        return RationalMotSeries(num, out)


# -- expansion -----------------------------------------------------------


def expand(series: RationalMotSeries, n_max: int) -> list[MotClass]:
    """Coefficients of T^0 .. T^n_max of a single-variable series.

    Negative-exponent numerator terms are allowed; their contributions are
    folded in (they only affect low-order coefficients).
    """
    if not series.is_single_variable():
        raise SeriesError("expand needs a single-variable series")
    # Convolve the numerator (negative exponents allowed) with each factor's
    # geometric expansion, tracking an index offset for the Laurent part.
    offset = min(0, series.numerator.min_degree())
    length = n_max - offset + 1
    work = [MOT_ZERO] * length
    for (e,), c in series.numerator.coeffs.items():
        if e - offset < length:
            work[e - offset] = work[e - offset] + c
    for f in series.factors:
        b = f.b[0]
        if b < 1:
            raise SeriesError("expansion needs factors with b >= 1")
        la = MotClass.L_power(f.a)
        for _ in range(f.mult):
            # in-place recurrence c_i += L^a c_{i-b} == convolution with
            # the geometric series sum_m L^{a m} T^{b m}
            for i in range(b, length):
                prev = work[i - b]
                if not prev.is_zero():
                    work[i] = work[i] + prev * la
    out = []
    for n in range(n_max + 1):
        idx = n - offset
        out.append(work[idx] if 0 <= idx < length else MOT_ZERO)
    return out


# -- resultants -----------------------------------------------------------


def resultant_closed_form(a: int, b: int, ap: int, bp: int) -> MotClass:
    """Res(1 - L^a T^b, 1 - L^ap T^bp) in closed form.

    Equals (-1)^bp * L^(a*bp) * (1 - L^((ap*b - a*bp)/d))^d with
    d = gcd(b, bp); a unit exactly when (a, b) and (ap, bp) are not
    proportional.
    """
    if b < 1 or bp < 1 or a < 0 or ap < 0:
        raise SeriesError("need b, b' >= 1 and a, a' >= 0")
    d = gcd(b, bp)
    e = (ap * b - a * bp) // d
    if (ap * b - a * bp) % d:
        raise AssertionError("gcd does not divide the cross term")
    base = MOT_ONE - MotClass.L_power(e)
    value = MotClass.L_power(a * bp) * base ** d
    return -value if bp % 2 else value


def sylvester_resultant(a: int, b: int, ap: int, bp: int) -> MotClass:
    """Independent oracle: determinant of the Sylvester matrix over Z[L]."""
    p1 = _binomial_coeff_list(a, b)[::-1]    # descending T-coefficients
    p2 = _binomial_coeff_list(ap, bp)[::-1]
    size = b + bp
    rows: list[list[IntPoly]] = []
    for i in range(bp):  # shifts of p1
        row = [ZERO] * size
        for j, c in enumerate(p1):
            row[i + j] = c
        rows.append(row)
    for i in range(b):  # shifts of p2
        row = [ZERO] * size
        for j, c in enumerate(p2):
            row[i + j] = c
        rows.append(row)
    det = bareiss_det(rows)
    return MotClass.from_poly(det)


def _binomial_coeff_list(a: int, b: int) -> list[IntPoly]:
    """T-coefficients (descending impossible; ascending) of 1 - L^a T^b."""
    out = [ZERO] * (b + 1)
    out[0] = ONE
    out[b] = -IntPoly.monomial(1, a)
    return out


# -- univariate polynomial helpers over MotClass ---------------------------


def _poly_trim(p: list[MotClass]) -> list[MotClass]:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _poly_add(p: list[MotClass], q: list[MotClass]) -> list[MotClass]:
    out = list(p) + [MOT_ZERO] * (len(q) - len(p))
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return _poly_trim(out)


def _poly_mul(p: list[MotClass], q: list[MotClass]) -> list[MotClass]:
    if not p or not q:
        return []
    out = [MOT_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return _poly_trim(out)


def _poly_scale(p: list[MotClass], c: MotClass) -> list[MotClass]:
    return _poly_trim([c * x for x in p])


def _poly_divmod(p: list[MotClass], d: list[MotClass]
                 ) -> tuple[list[MotClass], list[MotClass]]:
    """Euclidean division; the divisor's leading coefficient must be a unit."""
    d = _poly_trim(list(d))
    if not d:
        raise ZeroDivisionError("division by zero polynomial")
    lead_inv = inv(d[-1])
    rem = list(p)
    deg_d = len(d) - 1
    q = [MOT_ZERO] * max(0, len(rem) - deg_d)
    for k in range(len(rem) - 1, deg_d - 1, -1):
        c = rem[k]
        if c.is_zero():
            continue
        f = c * lead_inv
        q[k - deg_d] = f
        for i, dc in enumerate(d):
            rem[k - deg_d + i] = rem[k - deg_d + i] - f * dc
    return _poly_trim(q), _poly_trim(rem)


def _factor_poly(f: Factor) -> list[MotClass]:
    out = [MOT_ZERO] * (f.b[0] + 1)
    out[0] = MOT_ONE
    out[f.b[0]] = -MotClass.L_power(f.a)
    return out


# -- Bezout identities from Sylvester minors --------------------------------


def _bezout_pair(f: Factor, g: Factor) -> tuple[list[MotClass], list[MotClass]]:
    """U, V in M_k[T] with U*(1-L^a T^b) + V*(1-L^a' T^b') = 1.

    Solved by Cramer's rule on the Sylvester-style coefficient system; the
    determinant is the resultant, a unit by non-proportionality, and the
    minors are integer polynomials in L.
    """
    a, b = f.a, f.b[0]
    ap, bp = g.a, g.b[0]
    if a * bp == ap * b:
        raise SeriesError(
            f"proportional factor pair (a={a}, b={b}) ~ (a'={ap}, b'={bp}): "
            "resultant is not a unit")
    p1 = _binomial_coeff_list(a, b)
    p2 = _binomial_coeff_list(ap, bp)
    size = b + bp
    # Columns: u_0..u_{bp-1} then v_0..v_{b-1}; row k matches T^k coefficient.
    mat: list[list[IntPoly]] = [[ZERO] * size for _ in range(size)]
    for i in range(bp):
        for j, c in enumerate(p1):
            if i + j < size:
                mat[i + j][i] = c
    for i in range(b):
        for j, c in enumerate(p2):
            if i + j < size:
                mat[i + j][bp + i] = c
    det = bareiss_det(mat)
    sols: list[MotClass] = []
    for col in range(size):
        replaced = [[mat[r][c] if c != col else (ONE if r == 0 else ZERO)
                     for c in range(size)] for r in range(size)]
        sols.append(grot.mot_from_fraction(bareiss_det(replaced), det))
    u = _poly_trim(sols[:bp])
    v = _poly_trim(sols[bp:])
    return u, v


def _bezout_power(f_poly: list[MotClass], g_poly: list[MotClass],
                  u: list[MotClass], v: list[MotClass], n: int, m: int
                  ) -> tuple[list[MotClass], list[MotClass]]:
    """From 1 = u*f + v*g, produce 1 = A*f^n + B*g^m.

    Expand (u f + v g)^(n+m-1); every term has either f-exponent >= n or
    g-exponent >= m, so the binomial sum splits as required.
    """
    total = n + m - 1
    a_part: list[MotClass] = []
    b_part: list[MotClass] = []
    uf = _poly_mul(u, f_poly)
    vg = _poly_mul(v, g_poly)
    uf_pows = [[MOT_ONE]]
    vg_pows = [[MOT_ONE]]
    for _ in range(total):
        uf_pows.append(_poly_mul(uf_pows[-1], uf))
        vg_pows.append(_poly_mul(vg_pows[-1], vg))
    for k in range(total + 1):
        c = MotClass.from_int(comb(total, k))
        if k >= n:
            red = _poly_mul(_poly_pow(u, k), _poly_pow(f_poly, k - n))
            red = _poly_mul(red, vg_pows[total - k])
            a_part = _poly_add(a_part, _poly_scale(red, c))
        else:
            red = _poly_mul(_poly_pow(v, total - k),
                            _poly_pow(g_poly, total - k - m))
            red = _poly_mul(red, uf_pows[k])
            b_part = _poly_add(b_part, _poly_scale(red, c))
    return a_part, b_part


def _poly_pow(p: list[MotClass], n: int) -> list[MotClass]:
    out = [MOT_ONE]
    for _ in range(n):
        out = _poly_mul(out, p)
    return out


# -- partial fractions -------------------------------------------------------


@dataclass
class PartialFractions:
    """P = Q * prod P_i^{n_i} + sum_{i,j} Q_{i,j} P_i^{n_i - j} prod_{k != i} P_k^{n_k}."""

    quotient: list[MotClass]
    parts: dict[int, list[list[MotClass]]]  # factor index -> [Q_{i,1..n_i}]
    factors: tuple[Factor, ...]

    def recombine(self) -> list[MotClass]:
        fpolys = [_factor_poly(f) for f in self.factors]
        prod_all = [MOT_ONE]
        for f, poly in zip(self.factors, fpolys):
            prod_all = _poly_mul(prod_all, _poly_pow(poly, f.mult))
        total = _poly_mul(self.quotient, prod_all)
        for i, f in enumerate(self.factors):
            others = [MOT_ONE]
            for k, g in enumerate(self.factors):
                if k != i:
                    others = _poly_mul(others, _poly_pow(fpolys[k], g.mult))
            for j, qij in enumerate(self.parts[i], start=1):
                term = _poly_mul(qij, _poly_pow(fpolys[i], f.mult - j))
                total = _poly_add(total, _poly_mul(term, others))
        return total


def partial_fractions(p: LaurentPolyMot, factors: Sequence[Factor]
                      ) -> PartialFractions:
    """Decompose P / prod (1 - L^a_i T^b_i)^{n_i} into partial fractions.

    Requires a true polynomial numerator and pairwise non-proportional
    single-variable factors; the Q_{i,j} have degree <= b_i - 1.
    """
    if not p.is_single_variable():
        raise SeriesError("partial fractions are single-variable")
    if p.min_degree() < 0:
        raise SeriesError("numerator must be a polynomial (no T^-k terms)")
    facs = tuple(factors)
    for i in range(len(facs)):
        for j in range(i + 1, len(facs)):
            if facs[i].a * facs[j].b[0] == facs[j].a * facs[i].b[0]:
                raise SeriesError(
                    "proportional factor pair: resultant is not a unit")
    p_list = [MOT_ZERO] * (p.degree() + 1 if not p.is_zero() else 0)
    for (e,), c in p.coeffs.items():
        p_list[e] = c
    p_list = _poly_trim(p_list)

    fpolys = [_factor_poly(f) for f in facs]
    if not facs:
        return PartialFractions(p_list, {}, facs)

    # Split P / prod q_i into sum W_i / q_i with q_i = P_i^{n_i}, iterating
    # the two-term Bezout split; polynomial parts accumulate in `quotient`.
    quotient: list[MotClass] = []
    parts: dict[int, list[list[MotClass]]] = {}
    remaining = list(range(len(facs)))
    current = p_list

    def q_poly(i: int) -> list[MotClass]:
        return _poly_pow(fpolys[i], facs[i].mult)

    for pos, i in enumerate(remaining):
        if pos == len(remaining) - 1:
            w_i = current
        else:
            rest = remaining[pos + 1:]
            rest_poly = [MOT_ONE]
            for k in rest:
                rest_poly = _poly_mul(rest_poly, q_poly(k))
            # Bezout of q_i against prod of the rest: combine pairwise ones.
            a_cof, b_cof = _bezout_against_rest(facs, fpolys, i, rest)
            # 1 = a_cof * q_i + b_cof * rest_poly
            w_i = _poly_mul(current, b_cof)
            current = _poly_mul(current, a_cof)
        # reduce W_i modulo q_i and produce the P_i-adic tail
        qi = q_poly(i)
        div, rem = _poly_divmod(w_i, qi)
        quotient = _poly_add(quotient, div)
        if pos < len(remaining) - 1:
            # fold the polynomial overflow back into the running numerator:
            # current stays as-is; div already captured.
            pass
        tail: list[list[MotClass]] = []
        work = rem
        # P_i-adic digits of rem: rem = sum_j R_j P_i^{n_i - j}, deg R_j < b_i
        digits: list[list[MotClass]] = []
        for _ in range(facs[i].mult):
            work, r = _poly_divmod(work, fpolys[i])
            digits.append(r)
        if _poly_trim(work):
            raise AssertionError("P_i-adic expansion left a remainder")
        # digits[0] pairs with P_i^{n_i-?}: rem = sum digits[k] * P_i^k,
        # so Q_{i,j} with j = n_i - k: j runs n_i..1 as k runs 0..n_i-1
        for j in range(1, facs[i].mult + 1):
            tail.append(digits[facs[i].mult - j])
        parts[i] = tail
    return PartialFractions(quotient, parts, facs)


def _bezout_against_rest(facs: Sequence[Factor], fpolys: list[list[MotClass]],
                         i: int, rest: list[int]
                         ) -> tuple[list[MotClass], list[MotClass]]:
    """Cofactors (A, B) with 1 = A q_i + B prod_{k in rest} q_k.

    Multiplies the pairwise identities 1 = a_k q_i + b_k q_k; everything
    not purely a product of the b_k q_k terms is divisible by q_i.
    """
    qi = _poly_pow(fpolys[i], facs[i].mult)
    acc_a: list[MotClass] = []          # zero
    acc_b: list[MotClass] = [MOT_ONE]
    acc_rest: list[MotClass] = [MOT_ONE]
    for k in rest:
        u, v = _bezout_pair(facs[i], facs[k])
        a_k, b_k = _bezout_power(fpolys[i], fpolys[k], u, v,
                                 facs[i].mult, facs[k].mult)
        qk = _poly_pow(fpolys[k], facs[k].mult)
        # (acc_a q_i + acc_b acc_rest)(a_k q_i + b_k q_k):
        new_a = _poly_add(
            _poly_mul(_poly_mul(acc_a, a_k), qi),
            _poly_add(_poly_mul(_poly_mul(acc_a, b_k), qk),
                      _poly_mul(_poly_mul(acc_b, acc_rest), a_k)))
        acc_a = new_a
        acc_b = _poly_mul(acc_b, b_k)
        acc_rest = _poly_mul(acc_rest, qk)
    return acc_a, acc_b


# -- specialization and dagger evaluation -------------------------------------


def specialize_lambda(series: RationalMotSeries,
                      weights: Mapping[str, int],
                      var: str = "T") -> RationalMotSeries:
    """Substitute T_alpha -> T^weights[alpha]; factors map b -> sum(w*b)."""
    for v in series.variables:
        if weights.get(v, 0) < 1:
            raise SeriesError(f"weight for {v} must be a positive integer")
    num = series.numerator.substitute_monomials(weights, var)
    facs = []
    for f in series.factors:
        b = sum(w * weights[v] for w, v in zip(f.b, series.variables))
        facs.append(Factor(f.a, (b,), f.mult))
    return RationalMotSeries(num, facs)


def evaluate_dagger_at_Linv(series: RationalMotSeries) -> MotClass:
    """Exact value at T = L^-1; every factor must satisfy b > a."""
    bad = [f for f in series.factors if not f.is_dagger()]
    if bad:
        f = bad[0]
        raise SeriesError(
            f"not a dagger element: factor (a={f.a}, b={f.b}) has b <= a")
    value = series.numerator.eval_at_Linv()
    for f in series.factors:
        base = MOT_ONE - MotClass.L_power(f.a - f.total_b)
        value = value * inv(base) ** f.mult
    return value


def merge_proportional_factors(series: RationalMotSeries) -> RationalMotSeries:
    """Lift proportional single-variable factors to their common lcm shape.

    Uses 1 - L^m T^n | 1 - L^{mp} T^{np}: each factor in a proportional
    family is raised to the family's lcm shape, the cofactor polynomials
    multiplying into the numerator.
    """
    if not series.is_single_variable():
        raise SeriesError("merge needs a single-variable series")
    groups: dict[tuple[int, int], list[Factor]] = {}
    for f in series.factors:
        b = f.b[0]
        d = gcd(f.a, b)
        key = (f.a // d, b // d) if d else (f.a, b)
        groups.setdefault(key, []).append(f)
    num = series.numerator
    out: list[Factor] = []
    for (ar, br), fam in sorted(groups.items()):
        if len(fam) == 1:
            out.append(fam[0])
            continue
        scale = 1
        for f in fam:
            scale = scale * (f.b[0] // br) // gcd(scale, f.b[0] // br)
        a_l, b_l = ar * scale, br * scale
        total_mult = 0
        for f in fam:
            p = scale // (f.b[0] // br)
            total_mult += f.mult
            if p > 1:
                # (1 - L^{a_l} T^{b_l})/(1 - L^a T^b) = sum_{i<p} L^{ai} T^{bi}
                cof = LaurentPolyMot(series.variables, {
                    (f.b[0] * i,): MotClass.L_power(f.a * i) for i in range(p)})
                for _ in range(f.mult):
                    num = num * cof
        out.append(Factor(a_l, (b_l,), total_mult))
    return RationalMotSeries(num, out)


# -- tauberian extraction ------------------------------------------------------


class _SeriesParser(grot._Parser):
    """Expression parser valued in LaurentPolyMot over a fixed variable set."""

    def __init__(self, text: str, variables: Sequence[str],
                 registry: SymbolRegistry | None = None):
        reg = registry or grot.EMPTY_REGISTRY
        super().__init__(text, reg.names())
        self.variables = tuple(variables)

    def convert_int(self, c: int):
        return LaurentPolyMot.constant(self.variables, MotClass.from_int(c))

    def resolve_name(self, tok: str):
        if tok == "L":
            return LaurentPolyMot.constant(self.variables, MotClass.L_power(1))
        if tok in self.variables:
            exps = tuple(1 if v == tok else 0 for v in self.variables)
            return LaurentPolyMot.monomial(self.variables, exps)
        if tok in self.names:
            return LaurentPolyMot.constant(self.variables, MotClass.symbol(tok))
        raise grot.MotError(f"unknown name {tok!r}")


def parse_laurent(text: str, variables: Sequence[str],
                  registry: SymbolRegistry | None = None) -> LaurentPolyMot:
    """Parse a Laurent-polynomial expression over L, symbols and T-variables."""
    return _SeriesParser(text, variables, registry).parse()


def series_to_json(series: RationalMotSeries) -> dict:
    return {
        "variables": list(series.variables),
        "num": series.numerator.render(),
        "factors": [[f.a, list(f.b), f.mult] for f in series.factors],
        "dagger": series.dagger(),
    }


def series_from_json(obj: dict, registry: SymbolRegistry | None = None
                     ) -> RationalMotSeries:
    variables = tuple(obj.get("variables", ("T",)))
    num = parse_laurent(obj["num"], variables, registry)
    factors = []
    for entry in obj.get("factors", []):
        a, b, mult = entry
        if isinstance(b, int):
            b = [b]
        factors.append(Factor(a, tuple(b), mult))
    series = RationalMotSeries(num, factors)
    if "dagger" in obj and bool(obj["dagger"]) != series.dagger():
        raise SeriesError(
            f"declared dagger flag {obj['dagger']} does not match the factors")
    return series


CASE_ONE = "Case1"
CASE_TWO = "Case2"
EMPTY_CLASS = "EmptyClass"


@dataclass
class ClassReport:
    """Asymptotics of the coefficients in one residue class mod a."""

    residue: int
    case: str
    dim_minus_n: int | None = None
    nu_log_exponent: int | None = None
    witnesses: dict[int, MotClass] = field(default_factory=dict)

    def summary(self) -> str:
        if self.case == CASE_TWO:
            return (f"p={self.residue}: {self.case}, dim-n -> {self.dim_minus_n}, "
                    f"nu-exponent -> {self.nu_log_exponent}")
        return f"p={self.residue}: {self.case}"


@dataclass
class TauberianReport:
    modulus: int
    pole_mult: int
    classes: dict[int, ClassReport]
    value_at_Linv: MotClass
    value_effective: bool
    checked_horizon: tuple[int, int]

    def summary_lines(self) -> list[str]:
        lines = [c.summary() for _, c in sorted(self.classes.items())]
        lines.append(f"P(L^-1) = {render_mot(self.value_at_Linv)}"
                     f" ({'effective' if self.value_effective else 'not certified'})")
        return lines


def tauberian_report(series: RationalMotSeries, a: int, d: int,
                     burn_in: int = 50, horizon: int = 200,
                     registry: SymbolRegistry | None = None) -> TauberianReport:
    """Extract per-residue-class coefficient asymptotics and cross-check.

    The series must carry (1 - L^a T^a)^d as its only a = b factor shape,
    all other factors strictly dagger.  For each residue class p mod a the
    report tags Case2 (dim([M_n]) - n has the limit d_p and log nu / log n
    tends to j_p - 1), Case1 (no a = b witness survives; sub-linear growth
    checked on the horizon), or EmptyClass (all horizon coefficients in the
    class vanish).  Predictions are verified against expand() + dim_nu for
    burn_in <= n <= horizon.
    """
    if not series.is_single_variable():
        raise SeriesError("tauberian extraction is single-variable")
    if a < 1 or d < 1:
        raise SeriesError("need a >= 1 and d >= 1")
    eq_shapes = {}
    for f in series.factors:
        if f.a == f.b[0]:
            eq_shapes[f.a] = eq_shapes.get(f.a, 0) + f.mult
        elif f.a > f.b[0]:
            raise SeriesError("factor with a > b is outside M_k{T}")
    if len(eq_shapes) > 1:
        raise SeriesError("two proportional a=b factor shapes; merge them first")
    if eq_shapes != {a: d}:
        raise SeriesError(
            f"series must carry exactly (1 - L^{a} T^{a})^{d}; found {eq_shapes}")

    # Shift a Laurent numerator to a polynomial one; n0 re-indexes below.
    n0 = min(0, series.numerator.min_degree())
    shifted_num = LaurentPolyMot(series.variables, {
        (e - n0,): c for (e,), c in series.numerator.coeffs.items()})
    pf = partial_fractions(shifted_num, series.factors)
    idx_main = next(i for i, f in enumerate(pf.factors)
                    if f.a == a and f.b[0] == a)

    # q_{1,j,p}: T^p coefficient of Q_{1,j}  (paper indexing: j = 1..d).
    witnesses: dict[int, list[MotClass]] = {}
    for j in range(1, d + 1):
        qij = pf.parts[idx_main][j - 1]
        witnesses[j] = [qij[p] if p < len(qij) else MOT_ZERO for p in range(a)]

    value = evaluate_dagger_at_Linv(
        series.clear_factor(a, (a,), d))
    effective = grot.effectivity_certificate(value, registry)

    coeffs = expand(series, horizon)
    deg_q0 = len(pf.quotient) - 1 + n0

    classes: dict[int, ClassReport] = {}
    for p_res in range(a):
        # witnesses live at residue (p_res - n0) mod a of the shifted series
        p_shift = (p_res - n0) % a
        wit = {j: witnesses[j][p_shift] for j in range(1, d + 1)}
        dims = {j: dim_nu(w, registry) for j, w in wit.items()}
        live = {j for j, (dd, _) in dims.items() if dd != MINUS_INFINITY}
        ns = [n for n in range(max(burn_in, deg_q0 + 1, 1), horizon + 1)
              if n % a == p_res]
        if not live:
            nonzero = [n for n in ns if not coeffs[n].is_zero()]
            if not nonzero:
                classes[p_res] = ClassReport(p_res, EMPTY_CLASS, witnesses=wit)
            else:
                _check_case1_bound(series, coeffs, nonzero, registry)
                classes[p_res] = ClassReport(p_res, CASE_ONE, witnesses=wit)
            continue
        d_p = max(int(dims[j][0]) - p_shift for j in live)
        attaining = [j for j in live if int(dims[j][0]) - p_shift == d_p]
        j_p = max(attaining)
        report = ClassReport(p_res, CASE_TWO, dim_minus_n=d_p - n0,
                             nu_log_exponent=j_p - 1, witnesses=wit)
        _cross_check_case2(coeffs, ns, a, n0, d_p, dims, attaining, registry)
        classes[p_res] = report

    if effective and not value.is_zero():
        if not any(c.case == CASE_TWO for c in classes.values()):
            raise AssertionError(
                "P(L^-1) effective nonzero but no residue class is Case2")
    return TauberianReport(a, d, classes, value, effective,
                           (burn_in, horizon))


def _cross_check_case2(coeffs, ns, a, n0, d_p, dims, attaining, registry):
    # With the numerator shifted by T^{-n0}, coefficient n of the series is
    # coefficient n - n0 of the shifted one, whose dim is (n - n0) + d_p and
    # whose component count comes from the attaining witnesses.
    for n in ns:
        m = (n - n0) // a
        expected_dim = (n - n0) + d_p
        expected_nu = sum(comb(j + m - 1, j - 1) * dims[j][1]
                          for j in attaining)
        got_dim, got_nu = dim_nu(coeffs[n], registry)
        if got_dim != expected_dim or got_nu != expected_nu:
            raise AssertionError(
                f"tauberian cross-check failed at n={n}: predicted "
                f"(dim, nu) = ({expected_dim}, {expected_nu}), "
                f"expansion gives ({got_dim}, {got_nu})")


def _check_case1_bound(series, coeffs, ns, registry):
    slopes = [Fraction(f.a, f.b[0]) for f in series.factors if f.a < f.b[0]]
    slope = max(slopes, default=Fraction(0))
    guard = max((f.a for f in series.factors), default=0) + max(
        (abs(int(dim_nu(c, registry)[0]))
         for c in series.numerator.coeffs.values() if not c.is_zero()),
        default=0) + 4
    for n in ns:
        dd, _ = dim_nu(coeffs[n], registry)
        if dd != MINUS_INFINITY and Fraction(dd) > slope * n + guard:
            raise AssertionError(
                f"Case1 class violates dim <= (max a_i/b_i) n + O(1) at n={n}")
