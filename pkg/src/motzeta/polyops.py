"""Exact polynomial and small linear-algebra primitives.

Everything here is plain integer (or mod-p) arithmetic: dense univariate
polynomials over Z, cyclotomic polynomials, fraction-free determinants,
and row reduction over a prime field.  These are the workhorses below the
ring of motivic classes and the finite-field windows; nothing in this
module knows about L, T or characters.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


class IntPoly:
    """Dense univariate polynomial with integer coefficients.

    ``coeffs[i]`` is the coefficient of ``x^i``; the tuple carries no
    trailing zeros, and the zero polynomial is the empty tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(c: int) -> "IntPoly":
        return IntPoly((c,))

    @staticmethod
    def monomial(c: int, k: int) -> "IntPoly":
        if k < 0:
            raise ValueError("monomial exponent must be >= 0")
        return IntPoly((0,) * k + (c,))

    # -- basic structure ----------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def valuation(self) -> int:
        """Largest k with x^k dividing the polynomial (0 for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def __hash__(self):
        return hash(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPoly(out)

    def scale(self, c: int) -> "IntPoly":
        return IntPoly(tuple(c * x for x in self.coeffs))

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x^k (k >= 0) or exactly divide by x^-k (k < 0)."""
        if k >= 0:
            if not self.coeffs:
                return self
            return IntPoly((0,) * k + self.coeffs)
        if any(self.coeffs[i] for i in range(min(-k, len(self.coeffs)))):
            raise ValueError("shift would truncate nonzero coefficients")
        return IntPoly(self.coeffs[-k:])

    def __pow__(self, n: int) -> "IntPoly":
        if n < 0:
            raise ValueError("negative power")
        out = IntPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Division with remainder; requires each elimination step exact.

        Works whenever the leading coefficient of ``other`` divides every
        intermediate leading coefficient (always true for monic/unit-lead
        divisors, which is the only way it is used here).
        """
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        dlead = other.lead()
        ddeg = other.degree
        q = [0] * max(0, len(rem) - ddeg)
        for k in range(len(rem) - 1, ddeg - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            if c % dlead:
                raise ValueError("inexact polynomial division step")
            f = c // dlead
            q[k - ddeg] = f
            for i, dc in enumerate(other.coeffs):
                rem[k - ddeg + i] -= f * dc
        return IntPoly(q), IntPoly(rem)

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def divides(self, other: "IntPoly") -> bool:
        """Whether self divides other over Q (hence over Z when primitive)."""
        if self.is_zero():
            return other.is_zero()
        if other.is_zero():
            return True
        if other.degree < self.degree:
            return False
        rem = [Fraction(c) for c in other.coeffs]
        dlead = Fraction(self.lead())
        ddeg = self.degree
        for k in range(len(rem) - 1, ddeg - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c / dlead
            for i, dc in enumerate(self.coeffs):
                rem[k - ddeg + i] -= f * dc
        return all(c == 0 for c in rem)

    # -- evaluation ----------------------------------------------------

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_int(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def substitute_power(self, k: int) -> "IntPoly":
        """Return self(x^k) for k >= 1."""
        if k < 1:
            raise ValueError("power substitution needs k >= 1")
        out = [0] * (k * self.degree + 1 if self.coeffs else 0)
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * k] = c
        return IntPoly(out)


ONE = IntPoly((1,))
ZERO = IntPoly()


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntPoly:
    """The d-th cyclotomic polynomial, by dividing x^d - 1 by the proper ones."""
    if d < 1:
        raise ValueError("cyclotomic index must be >= 1")
    num = IntPoly.monomial(1, d) - ONE
    for e in range(1, d):
        if d % e == 0:
            num = num.exact_div(cyclotomic(e))
    return num


@lru_cache(maxsize=None)
def _totient(d: int) -> int:
    n, out, p = d, d, 2
    while p * p <= n:
        if n % p == 0:
            out -= out // p
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out -= out // n
    return out


def cyclotomic_split(poly: IntPoly) -> tuple[dict[int, int], IntPoly]:
    """Factor out all cyclotomic factors: poly = prod Phi_d^m_d * rest.

    Returns (multiplicities, rest).  The search is exhaustive over the d
    with phi(d) <= deg(poly), so rest has no cyclotomic factor at all.
    """
    if poly.is_zero():
        return {}, poly
    mults: dict[int, int] = {}
    rest = poly
    d = 1
    # phi(d) >= sqrt(d/2), so d <= 2*deg^2 + 2 bounds the search.
    bound = 2 * max(rest.degree, 1) ** 2 + 2
    while d <= bound and rest.degree >= 1:
        if _totient(d) <= rest.degree:
            phi = cyclotomic(d)
            while phi.divides(rest):
                rest = rest.exact_div(phi)
                mults[d] = mults.get(d, 0) + 1
        d += 1
    return mults, rest


def bareiss_det(matrix: Sequence[Sequence[IntPoly]]) -> IntPoly:
    """Fraction-free determinant of a square matrix over Z[x]."""
    n = len(matrix)
    if n == 0:
        return ONE
    m = [list(row) for row in matrix]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return ZERO
        piv = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (piv * m[i][j] - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = ZERO
        prev = piv
    det = m[n - 1][n - 1]
    return det.scale(sign) if sign < 0 else det


# -- linear algebra over F_p -------------------------------------------


def fp_rref(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Row-reduce over F_p; returns (reduced rows, pivot column indices)."""
    m = [[c % p for c in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p) if p > 2 else m[r][c]
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def fp_solve_affine(a: Sequence[Sequence[int]], b: Sequence[int], p: int,
                    ncols: int | None = None
                    ) -> tuple[list[int], list[list[int]]] | None:
    """Solve a x = b over F_p; returns (particular, kernel basis) or None.

    ``a`` may have zero rows (no constraints): pass ``ncols`` so the full
    space comes back as the kernel.
    """
    nrows = len(a)
    if ncols is None:
        ncols = len(a[0]) if nrows else 0
    if nrows == 0:
        ident = [[1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
        return [0] * ncols, ident
    aug = [list(a[i]) + [b[i] % p] for i in range(nrows)]
    red, pivots = fp_rref(aug, p)
    if ncols in pivots:
        return None
    x0 = [0] * ncols
    for r, c in enumerate(pivots):
        x0[c] = red[r][ncols]
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    kernel = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-red[r][f]) % p
        kernel.append(v)
    return x0, kernel
