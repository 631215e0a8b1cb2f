"""Global harmonic analysis on the function field of P^1 over F_q.

Adelic Schwartz-Bruhat functions are finitely supported products of local
window functions (unit-ball indicators elsewhere).  Summation over the
rational points F^n runs literally over a Riemann-Roch lattice L(D)^n,
pulling each basis combination back through its local expansions; the
global Fourier transform is computed factorwise with the residue pairing
of a fixed differential form, and the Poisson identity

    sum_{x in F^n} Phi(x) = q^{(1-g) n} sum_{y in F^n} F Phi(y)

is then an exact, checkable statement (g = 0 here).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cycint import CycValue
from .funfield import (INF, DifferentialForm, FqPoly, FqRat, LocalExpansion,
                       Place, finite_pole_places, form_dt, residue)
from .local import (AffineCharacterFn, LocalFn, LocalWindow, ResiduePairing,
                    SBLocal, fourier)

ENUM_CAP = 2 * 10 ** 6

GENUS = 0  # P^1 throughout; formulas keep the genus symbolic where it appears


class GlobalError(ValueError):
    pass


class Divisor:
    """Finite formal sum of degree-one places with integer multiplicities."""

    def __init__(self, coeffs: dict[Place, int] | None = None):
        self.coeffs = {pl: m for pl, m in (coeffs or {}).items() if m}

    def degree(self) -> int:
        return sum(self.coeffs.values())

    def multiplicity(self, place: Place) -> int:
        return self.coeffs.get(place, 0)

    def support(self) -> list[Place]:
        return sorted(self.coeffs)

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.coeffs)
        for pl, m in other.coeffs.items():
            out[pl] = out.get(pl, 0) + m
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({pl: -m for pl, m in self.coeffs.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.coeffs == other.coeffs

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{m}[{pl}]" for pl, m in sorted(self.coeffs.items()))


@dataclass
class RRBasis:
    """Explicit basis of L(D) = {y : div(y) + D >= 0} + {0} on P^1."""

    divisor: Divisor
    elements: list[FqRat]

    @property
    def dim(self) -> int:
        return len(self.elements)


def riemann_roch_basis(d: Divisor, q: int) -> RRBasis:
    """Basis Z t^j / P of L(D); dimension deg(D) + 1 when deg(D) >= 0.

    Every basis element is re-verified against the divisor condition at
    each place of the support.
    """
    pden = FqPoly.const(q, 1)
    znum = FqPoly.const(q, 1)
    for pl, m in d.coeffs.items():
        if pl.is_infinite():
            continue
        lin = FqPoly(q, (-pl.finite, 1))
        if m > 0:
            pden = pden * lin ** m
        else:
            znum = znum * lin ** (-m)
    dmax = d.multiplicity(INF) + pden.degree - znum.degree
    if d.degree() < 0:
        return RRBasis(d, [])
    elements = []
    tpow = FqPoly.const(q, 1)
    for j in range(dmax + 1):
        elem = FqRat(znum * tpow, pden)
        elements.append(elem)
        tpow = tpow * FqPoly.gen(q)
    basis = RRBasis(d, elements)
    if basis.dim != d.degree() + 1:
        raise AssertionError("Riemann-Roch dimension law failed on P^1")
    for elem in elements:
        for pl, m in d.coeffs.items():
            if elem.order_at(pl) < -m:
                raise AssertionError("basis element violates a divisor bound")
    return basis


def ell(d: Divisor, q: int) -> int:
    """dim L(D) on P^1: deg(D)+1 for deg >= 0, else 0."""
    return riemann_roch_basis(d, q).dim


def residue_theorem_check(x: FqRat, omega: DifferentialForm) -> bool:
    """Exact check that the residues of x omega sum to zero.

    The poles of x omega must sit at degree-one places (this is what
    rational_places_of_divisor enforces).
    """
    if x.is_zero():
        return True
    places = {INF}
    places.update(finite_pole_places(x * omega.f))
    total = 0
    for pl in places:
        total += residue(x, omega, pl)
    return total % x.q == 0


@dataclass
class GlobalSB:
    """Finitely supported adelic function: local factor per supported place.

    Every factor is an n-dimensional window function at its place; all
    other places implicitly carry the unit-ball indicator.
    """

    q: int
    n: int
    factors: dict[Place, LocalFn]

    def __post_init__(self):
        for pl, fn in self.factors.items():
            if fn.window.q != self.q or fn.window.n != self.n:
                raise GlobalError(f"factor at {pl} has inconsistent (q, n)")

    def support(self) -> list[Place]:
        return sorted(self.factors)

    def with_factor(self, place: Place, fn: LocalFn) -> "GlobalSB":
        out = dict(self.factors)
        out[place] = fn
        return GlobalSB(self.q, self.n, out)


def simple_function(q: int, n: int, levels: dict[Place, tuple[int, int]],
                    centers: dict[Place, list] | None = None,
                    radii: dict[Place, int] | None = None) -> GlobalSB:
    """Product of balls: at each place the indicator of center + t^r R^n.

    ``centers`` maps a place to one Laurent expansion (or FiniteLaurent)
    per coordinate; omitted places/coordinates center at 0, with ord >= M
    required.  The radius r defaults to the level top N (the classical
    simple function); r = M gives the full-window indicator.
    """
    centers = centers or {}
    radii = radii or {}
    factors: dict[Place, LocalFn] = {}
    for pl, (m, nn) in levels.items():
        window = LocalWindow(q, n, m, nn)
        radius = radii.get(pl, nn)
        if not m <= radius <= nn:
            raise GlobalError(f"radius at {pl} must lie in the level [{m},{nn}]")
        exps = centers.get(pl)
        pinned = radius - m
        rows, rhs = [], []
        for c in range(n):
            e = exps[c] if exps else None
            if e is not None and not e.is_zero() and e.ord < m:
                raise GlobalError(
                    f"center at {pl} has ord {e.ord} below the window floor {m}")
            for j in range(pinned):
                row = [0] * window.ndigits
                row[c * window.width + j] = 1
                rows.append(row)
                rhs.append(0 if e is None else e.digit(m + j) % q)
        factors[pl] = AffineCharacterFn(window, rows, rhs,
                                        [0] * window.ndigits)
    return GlobalSB(q, n, factors)


def lattice_divisor(phi: GlobalSB) -> Divisor:
    """D = - sum M_s [s] over the supported places."""
    return Divisor({pl: -fn.window.M for pl, fn in phi.factors.items()})


def sum_over_rational_points(phi: GlobalSB) -> CycValue:
    """sum_{x in F^n} Phi(x), literally over the lattice L(D)^n.

    Builds D = -sum M_s [s], enumerates the q^(n dim L(D)) basis
    combinations, expands each coordinate at each supported place to the
    window depth and multiplies the local values.  Size above the cap is
    an error carrying the estimate.
    """
    q, n = phi.q, phi.n
    basis = riemann_roch_basis(lattice_divisor(phi), q)
    dim = basis.dim
    npoints = q ** (n * dim)
    if npoints > ENUM_CAP:
        raise GlobalError(
            f"lattice enumeration needs q^(n dim) = {npoints} points, "
            f"above the cap {ENUM_CAP}")
    # dim == 0 still leaves the single lattice point x = 0

    # digit matrices of the basis at each supported place
    place_digits: dict[Place, np.ndarray] = {}
    for pl, fn in phi.factors.items():
        w = fn.window
        mat = np.zeros((dim, w.width), dtype=np.int64)
        for i, elem in enumerate(basis.elements):
            exp = LocalExpansion(elem, pl)
            for j in range(w.width):
                mat[i, j] = exp.digit(w.M + j)
        place_digits[pl] = mat

    # coefficient grid: npoints rows of n blocks of dim coefficients
    ranks = np.arange(npoints, dtype=np.int64)
    nd = n * dim
    coeff_cols = [(ranks // q ** (nd - 1 - i)) % q for i in range(nd)]
    coeffs = np.stack(coeff_cols, axis=1) if nd else np.zeros((npoints, 0),
                                                              dtype=np.int64)

    affine = all(isinstance(fn, AffineCharacterFn)
                 for fn in phi.factors.values())
    if affine:
        mask = np.ones(npoints, dtype=bool)
        expo = np.zeros(npoints, dtype=np.int64)
        qexp = 0
        for pl, fn in phi.factors.items():
            digmat = _digits_for_coeffs(coeffs, place_digits[pl], n, dim, q)
            m_pl, e_pl = fn.eval_digit_matrix(digmat)
            mask &= m_pl
            expo += e_pl
            qexp += fn.qexp
        counts = np.bincount(expo[mask] % q, minlength=q)
        return CycValue.make(q, counts.tolist(), qexp)

    # generic (dense-table) path
    digmats = {pl: _digits_for_coeffs(coeffs, place_digits[pl], n, dim, q)
               for pl in phi.factors}
    total = CycValue.zero(q)
    for row in range(npoints):
        val = CycValue.one(q)
        for pl, fn in phi.factors.items():
            v = fn.value(tuple(int(x) for x in digmats[pl][row]))
            if v.is_zero():
                val = None
                break
            val = val * v
        if val is not None:
            total = total + val
    return total


def _digits_for_coeffs(coeffs: np.ndarray, basis_digits: np.ndarray,
                       n: int, dim: int, q: int) -> np.ndarray:
    npoints = coeffs.shape[0]
    width = basis_digits.shape[1]
    blocks = []
    for c in range(n):
        block = coeffs[:, c * dim:(c + 1) * dim] @ basis_digits
        blocks.append(block % q)
    return (np.concatenate(blocks, axis=1) if blocks
            else np.zeros((npoints, 0), dtype=np.int64))


def fourier_support(phi: GlobalSB, omega: DifferentialForm) -> list[Place]:
    """Support of Phi enlarged by the divisor of omega."""
    places = set(phi.factors)
    places.update(omega.divisor())
    return sorted(places)


def global_fourier(phi: GlobalSB, omega: DifferentialForm) -> GlobalSB:
    """Factorwise Fourier transform against the pairings res_s(. omega).

    Places outside the support with nonzero conductor are adjoined first
    (their implicit unit-ball factor does transform); at all remaining
    places 1_{R^n} is self-dual and stays implicit.
    """
    q, n = phi.q, phi.n
    out: dict[Place, LocalFn] = {}
    for pl in fourier_support(phi, omega):
        pairing = ResiduePairing(q, omega.expansion_at(pl))
        fn = phi.factors.get(pl)
        if fn is None:
            fn = AffineCharacterFn.full_indicator(LocalWindow(q, n, 0, 0))
        out[pl] = fourier(fn, pairing)
    return GlobalSB(q, n, out)


@dataclass
class PoissonVerdict:
    lhs: CycValue
    rhs: CycValue
    equal: bool

    def render(self) -> str:
        def fmt(v: CycValue) -> str:
            return str(v.as_fraction()) if v.is_rational() else v.render()
        return f"lhs={fmt(self.lhs)} rhs={fmt(self.rhs)} equal={str(self.equal).lower()}"


def poisson_check(phi: GlobalSB, omega: DifferentialForm | None = None
                  ) -> PoissonVerdict:
    """Exact two-sided Poisson summation check (genus 0)."""
    omega = omega or form_dt(phi.q)
    lhs = sum_over_rational_points(phi)
    transformed = global_fourier(phi, omega)
    rhs_sum = sum_over_rational_points(transformed)
    rhs = rhs_sum.scale_qpow(-(1 - GENUS) * phi.n)
    return PoissonVerdict(lhs, rhs, lhs == rhs)


def global_inversion_check(phi: GlobalSB, omega: DifferentialForm) -> bool:
    """FF Phi = q^(n(2g-2)) Phi(-.) checked factor by factor."""
    q, n = phi.q, phi.n
    ff = global_fourier(global_fourier(phi, omega), omega)
    conductors = {pl: -omega.order_at(pl) for pl in fourier_support(phi, omega)}
    from .local import affine_functions_equal
    for pl, fn in ff.factors.items():
        nu = conductors.get(pl, 0)
        orig = phi.factors.get(pl)
        if orig is None:
            orig = AffineCharacterFn.full_indicator(LocalWindow(q, n, 0, 0))
        expected = orig.negated_argument()
        scale = n * nu
        if isinstance(fn, AffineCharacterFn) and isinstance(expected,
                                                            AffineCharacterFn):
            if not affine_functions_equal(fn, expected, scale):
                return False
        else:
            fn_t = fn if isinstance(fn, SBLocal) else fn.to_sblocal()
            ex_t = (expected if isinstance(expected, SBLocal)
                    else expected.to_sblocal())
            if any(fn_t.value(pt) != ex_t.value(pt).scale_qpow(scale)
                   for pt in fn.window.points()):
                return False
    return True
