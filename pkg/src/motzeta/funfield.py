"""Rational function field F_q(t) of the projective line: places and expansions.

Supports degree-one places (rational points c of the affine line, with
uniformizer t - c, and the place at infinity with uniformizer 1/t), exact
Laurent expansions of rational functions and differential forms at these
places, divisors, and residues.  Everything is coefficient arithmetic
mod q; expansions extend lazily to any requested depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering

from .grot import MotError, _Parser


class FieldError(ValueError):
    pass


class FqPoly:
    """Dense polynomial over F_q; coeffs[i] is the coefficient of t^i."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q: int, coeffs=()):
        cs = [c % q for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.q = q
        self.coeffs = tuple(cs)

    @staticmethod
    def const(q: int, c: int) -> "FqPoly":
        return FqPoly(q, (c,))

    @staticmethod
    def gen(q: int) -> "FqPoly":
        return FqPoly(q, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        return (isinstance(other, FqPoly) and self.q == other.q
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.q, self.coeffs))

    def __add__(self, other: "FqPoly") -> "FqPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % self.q
        return FqPoly(self.q, out)

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.q, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "FqPoly") -> "FqPoly":
        return self + (-other)

    def __mul__(self, other: "FqPoly") -> "FqPoly":
        if self.is_zero() or other.is_zero():
            return FqPoly(self.q)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return FqPoly(self.q, out)

    def __pow__(self, n: int) -> "FqPoly":
        out = FqPoly.const(self.q, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "FqPoly"):
        if other.is_zero():
            raise ZeroDivisionError
        q = self.q
        inv_lead = pow(other.coeffs[-1], q - 2, q) if q > 2 else other.coeffs[-1]
        rem = list(self.coeffs)
        dd = other.degree
        quo = [0] * max(0, len(rem) - dd)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k]
            if not c:
                continue
            f = (c * inv_lead) % q
            quo[k - dd] = f
            for i, dc in enumerate(other.coeffs):
                rem[k - dd + i] = (rem[k - dd + i] - f * dc) % q
        return FqPoly(q, quo), FqPoly(q, rem)

    def gcd(self, other: "FqPoly") -> "FqPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        q = self.q
        inv_lead = pow(self.coeffs[-1], q - 2, q) if q > 2 else self.coeffs[-1]
        return FqPoly(q, tuple((c * inv_lead) % q for c in self.coeffs))

    def eval(self, c: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * c + a) % self.q
        return acc

    def shifted_arg(self, c: int) -> "FqPoly":
        """self(t + c)."""
        out = FqPoly(self.q)
        tc = FqPoly(self.q, (c, 1))
        for a in reversed(self.coeffs):
            out = out * tc + FqPoly.const(self.q, a)
        return out

    def reversed_coeffs(self, upto: int) -> "FqPoly":
        """t^upto * self(1/t) for upto >= degree."""
        if upto < self.degree:
            raise FieldError("reversal bound below degree")
        out = [0] * (upto + 1)
        for i, c in enumerate(self.coeffs):
            out[upto - i] = c
        return FqPoly(self.q, out)

    def valuation(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e in range(self.degree, -1, -1):
            c = self[e]
            if not c:
                continue
            if e == 0:
                body = str(c)
            else:
                v = "t" if e == 1 else f"t^{e}"
                body = v if c == 1 else f"{c}*{v}"
            parts.append(body)
        return " + ".join(parts)


@total_ordering
@dataclass(frozen=True)
class Place:
    """Degree-one place of F_q(t): a rational point c, or infinity."""

    finite: int | None  # None for infinity

    @staticmethod
    def at(c: int) -> "Place":
        return Place(c)

    @staticmethod
    def infinity() -> "Place":
        return Place(None)

    def is_infinite(self) -> bool:
        return self.finite is None

    def _key(self):
        return (1, 0) if self.finite is None else (0, self.finite)

    def __lt__(self, other):
        return self._key() < other._key()

    def __str__(self):
        return "inf" if self.finite is None else str(self.finite)


INF = Place.infinity()


class FqRat:
    """Reduced fraction num/den over F_q[t], den monic and nonzero."""

    __slots__ = ("q", "num", "den")

    def __init__(self, num: FqPoly, den: FqPoly | None = None):
        q = num.q
        if den is None:
            den = FqPoly.const(q, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.coeffs[-1]
        if lead != 1:
            inv_lead = pow(lead, q - 2, q) if q > 2 else lead
            num = num * FqPoly.const(q, inv_lead)
            den = den.monic()
        self.q = q
        self.num = num
        self.den = den

    @staticmethod
    def const(q: int, c: int) -> "FqRat":
        return FqRat(FqPoly.const(q, c))

    @staticmethod
    def gen(q: int) -> "FqRat":
        return FqRat(FqPoly.gen(q))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        return (isinstance(other, FqRat) and self.q == other.q
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.q, self.num, self.den))

    def __add__(self, other: "FqRat") -> "FqRat":
        return FqRat(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __neg__(self) -> "FqRat":
        return FqRat(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "FqRat") -> "FqRat":
        return FqRat(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "FqRat") -> "FqRat":
        if other.is_zero():
            raise ZeroDivisionError
        return FqRat(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "FqRat":
        if n < 0:
            return FqRat.const(self.q, 1) / self ** (-n)
        out = FqRat.const(self.q, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: int) -> "FqRat":
        return FqRat(self.num * FqPoly.const(self.q, c), self.den)

    def order_at(self, place: Place) -> int:
        """Valuation at the place; raises on the zero function."""
        if self.is_zero():
            raise FieldError("zero function has no finite order")
        if place.is_infinite():
            return self.den.degree - self.num.degree
        c = place.finite
        return _root_multiplicity(self.num, c) - _root_multiplicity(self.den, c)

    def render(self) -> str:
        if self.den.degree == 0 and self.den[0] == 1:
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"


def _root_multiplicity(poly: FqPoly, c: int) -> int:
    if poly.is_zero():
        raise FieldError("zero polynomial")
    m = 0
    lin = FqPoly(poly.q, (-c, 1))
    while poly.eval(c) == 0:
        poly = poly.divmod(lin)[0]
        m += 1
    return m


def finite_pole_places(f: FqRat) -> list[Place]:
    """Finite poles of f; error if any pole sits at a non-rational place."""
    rest = f.den
    out = []
    for c in range(f.q):
        m = _root_multiplicity(rest, c)
        if m:
            out.append(Place.at(c))
            rest = rest.divmod(FqPoly(f.q, (-c, 1)) ** m)[0]
    if rest.degree > 0:
        raise FieldError(
            f"pole factor {rest.render()} has no rational root; only "
            "degree-one places are supported")
    return out


def rational_places_of_divisor(f: FqRat) -> dict[Place, int]:
    """div(f) as a map over degree-one places; rejects non-split factors."""
    out: dict[Place, int] = {}
    q = f.q
    for poly, sign in ((f.num, 1), (f.den, -1)):
        rest = poly
        for c in range(q):
            m = _root_multiplicity(rest, c)
            if m:
                out[Place.at(c)] = out.get(Place.at(c), 0) + sign * m
                rest = rest.divmod(FqPoly(q, (-c, 1)) ** m)[0]
        if rest.degree > 0:
            raise FieldError(
                f"factor {rest.render()} has no rational root; only degree-one "
                "places are supported")
    d_inf = f.den.degree - f.num.degree
    if d_inf:
        out[INF] = out.get(INF, 0) + d_inf
    return {pl: m for pl, m in out.items() if m}


class LocalExpansion:
    """Lazy Laurent expansion of a rational function at a degree-one place.

    ``digit(i)`` is the coefficient of s^i where s is the uniformizer
    (t - c, or 1/t at infinity); coefficients are computed on demand by
    power-series division.
    """

    def __init__(self, f: FqRat, place: Place, scale: int = 1, shift: int = 0):
        q = f.q
        self.q = q
        self.place = place
        self._zero = f.is_zero()
        if self._zero:
            self.ord = 0
            self._digits: list[int] = []
            return
        if place.is_infinite():
            n, d = f.num, f.den
            bound = max(n.degree, d.degree)
            num_s = n.reversed_coeffs(bound)
            den_s = d.reversed_coeffs(bound)
        else:
            num_s = f.num.shifted_arg(place.finite)
            den_s = f.den.shifted_arg(place.finite)
        vn, vd = num_s.valuation(), den_s.valuation()
        self.ord = vn - vd + shift
        self._num = [(scale * c) % q for c in num_s.coeffs[vn:]]
        self._den = list(den_s.coeffs[vd:])
        self._digits = []
        self._den0_inv = pow(self._den[0], q - 2, q) if q > 2 else self._den[0]

    def is_zero(self) -> bool:
        return self._zero

    def digit(self, i: int) -> int:
        if self._zero:
            return 0
        k = i - self.ord
        if k < 0:
            return 0
        while len(self._digits) <= k:
            j = len(self._digits)
            acc = self._num[j] if j < len(self._num) else 0
            for m in range(1, min(j, len(self._den) - 1) + 1):
                acc -= self._den[m] * self._digits[j - m]
            self._digits.append((acc * self._den0_inv) % self.q)
        return self._digits[k]


@dataclass(frozen=True)
class DifferentialForm:
    """omega = f dt with f rational; the global Fourier pairing source."""

    f: FqRat

    @property
    def q(self) -> int:
        return self.f.q

    def expansion_at(self, place: Place) -> LocalExpansion:
        """Expansion of g with omega = g ds in the local uniformizer s."""
        if place.is_infinite():
            # t = 1/u, dt = -u^(-2) du
            return LocalExpansion(self.f, place, scale=-1, shift=-2)
        return LocalExpansion(self.f, place)

    def order_at(self, place: Place) -> int:
        base = self.f.order_at(place)
        return base - 2 if place.is_infinite() else base

    def divisor(self) -> dict[Place, int]:
        out = rational_places_of_divisor(self.f)
        out[INF] = out.get(INF, 0) - 2
        return {pl: m for pl, m in out.items() if m}


def form_dt(q: int) -> DifferentialForm:
    return DifferentialForm(FqRat.const(q, 1))


def product_expansion(x: FqRat, omega: DifferentialForm,
                      place: Place) -> LocalExpansion:
    """Expansion of x * (omega/ds) at the place."""
    if place.is_infinite():
        return LocalExpansion(x * omega.f, place, scale=-1, shift=-2)
    return LocalExpansion(x * omega.f, place)


def residue(x: FqRat, omega: DifferentialForm, place: Place) -> int:
    """res_s(x omega) in F_q."""
    return product_expansion(x, omega, place).digit(-1)


class _FqParser(_Parser):
    def __init__(self, text: str, q: int):
        super().__init__(text, names=())
        self.q = q

    def convert_int(self, c: int):
        return FqRat.const(self.q, c)

    def resolve_name(self, tok: str):
        if tok == "t":
            return FqRat.gen(self.q)
        raise MotError(f"unknown name {tok!r} in a rational-function expression")


def parse_ratfun(text: str, q: int) -> FqRat:
    """Parse a rational function in t over F_q, e.g. ``1/t`` or ``t^2 - 1``."""
    return _FqParser(text, q).parse()
