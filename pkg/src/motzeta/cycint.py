"""Exact values in Z[zeta_p][1/p]: the character side of the q-realization.

The additive character psi(u) = zeta_p^u of F_p takes values here, and all
finite-field realizations of motivic integrals stay inside this ring, so
every identity is checked bit-exactly.  An element is stored as an integer
coordinate vector on the power basis 1, zeta, ..., zeta^(p-2) (reduced
modulo the p-th cyclotomic polynomial) together with a power-of-p
denominator exponent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class CycError(ValueError):
    pass


@dataclass(frozen=True)
class CycValue:
    """c / p^den_exp with c = sum coords[i] zeta_p^i, coords reduced."""

    p: int
    coords: tuple[int, ...]
    den_exp: int

    @staticmethod
    def make(p: int, coords, den_exp: int = 0) -> "CycValue":
        if p < 2:
            raise CycError("p must be a prime >= 2")
        cs = list(coords)
        if len(cs) > p - 1:
            # reduce zeta^k for k >= p-1 via zeta^(p-1) = -(1 + ... + zeta^(p-2))
            for k in range(len(cs) - 1, p - 2, -1):
                c = cs[k]
                if c:
                    cs[k] = 0
                    base = k - (p - 1)
                    for i in range(p - 1):
                        cs[base + i] -= c
            cs = cs[:p - 1]
        cs += [0] * (p - 1 - len(cs))
        while den_exp > 0 and all(c % p == 0 for c in cs):
            cs = [c // p for c in cs]
            den_exp -= 1
        if all(c == 0 for c in cs):
            den_exp = 0
        if den_exp < 0:
            cs = [c * p ** (-den_exp) for c in cs]
            den_exp = 0
        return CycValue(p, tuple(cs), den_exp)

    @staticmethod
    def zero(p: int) -> "CycValue":
        return CycValue.make(p, ())

    @staticmethod
    def one(p: int) -> "CycValue":
        return CycValue.make(p, (1,))

    @staticmethod
    def from_int(p: int, c: int) -> "CycValue":
        return CycValue.make(p, (c,))

    @staticmethod
    def zeta_power(p: int, u: int) -> "CycValue":
        """psi(u) = zeta_p^u for u in F_p."""
        u %= p
        coords = [0] * p
        coords[u] = 1
        return CycValue.make(p, coords)

    @staticmethod
    def from_fraction(p: int, x: Fraction) -> "CycValue":
        num, den = x.numerator, x.denominator
        e = 0
        while den % p == 0:
            den //= p
            e += 1
        if den != 1:
            raise CycError(f"denominator {x.denominator} is not a power of {p}")
        return CycValue.make(p, (num,), e)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise CycError(f"value has a nontrivial character part: {self}")
        return Fraction(self.coords[0], self.p ** self.den_exp)

    def __add__(self, other: "CycValue") -> "CycValue":
        self._check(other)
        e = max(self.den_exp, other.den_exp)
        fa = self.p ** (e - self.den_exp)
        fb = self.p ** (e - other.den_exp)
        return CycValue.make(
            self.p, [a * fa + b * fb for a, b in zip(self.coords, other.coords)], e)

    def __neg__(self) -> "CycValue":
        return CycValue(self.p, tuple(-c for c in self.coords), self.den_exp)

    def __sub__(self, other: "CycValue") -> "CycValue":
        return self + (-other)

    def __mul__(self, other: "CycValue") -> "CycValue":
        self._check(other)
        n = self.p - 1
        out = [0] * (2 * n - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    out[i + j] += a * b
        return CycValue.make(self.p, out, self.den_exp + other.den_exp)

    def scale_qpow(self, k: int) -> "CycValue":
        """Multiply by p^(-k) (k may be negative)."""
        return CycValue.make(self.p, self.coords, self.den_exp + k)

    def scale_int(self, c: int) -> "CycValue":
        return CycValue.make(self.p, tuple(c * x for x in self.coords),
                             self.den_exp)

    def _check(self, other: "CycValue") -> None:
        if self.p != other.p:
            raise CycError("mixed characteristic")

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                z = "z" if i == 1 else f"z^{i}"
                parts.append(z if c == 1 else (f"-{z}" if c == -1 else f"{c}*{z}"))
        body = " + ".join(parts).replace("+ -", "- ")
        if self.den_exp:
            den = str(self.p) if self.den_exp == 1 else f"{self.p}^{self.den_exp}"
            return f"({body})/{den}"
        return body

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"p": self.p, "zeta_coords": list(self.coords),
                "den_exp": self.den_exp}
