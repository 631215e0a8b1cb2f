"""Boundary combinatorics and closed-form local zeta evaluations.

A :class:`BoundaryDatum` packages the strict-normal-crossings data at one
place: horizontal components alpha with multiplicities rho_alpha >= 2,
vertical components beta with multiplicities mu_beta, rho_beta and
extension integers e_{alpha,beta}, and the classes of the locally closed
strata Delta(A, beta).  From it the module computes the Clemens complex,
the trivial-character local zeta function

    Z(T, 0) = sum_{A,beta} prod_alpha T_alpha^{e_{alpha,beta}} L^{rho_beta}
              [Delta(A,beta)] L^{-n+|A|} (1-L^-1)^{|A|}
              prod_{alpha in A} L^{rho_alpha-1} T_alpha / (1 - L^{rho_alpha-1} T_alpha),

the polynomial integral-place variant, the denominator support of the
exponential (Igusa-with-character) variant where polar components drop
out, the leading constant at T = L^-1, and a literal jet-counting oracle
for the geometric-series coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .grot import (MINUS_INFINITY, MOT_ONE, MOT_ZERO, MotClass, MotError,
                   SymbolRegistry, dim_nu, render_mot)
from .series import Factor, LaurentPolyMot, RationalMotSeries

JET_CAP = 2 * 10 ** 6


class IgusaError(ValueError):
    pass


@dataclass(frozen=True)
class VerticalComponent:
    """One vertical component: multiplicity, anticanonical weight, e-vector."""

    name: str
    multiplicity: int = 1
    rho: int = 0
    e: dict = field(default_factory=dict)  # alpha -> e_{alpha,beta}

    def e_at(self, alpha: str) -> int:
        return self.e.get(alpha, 0)


@dataclass
class BoundaryDatum:
    """Strict-normal-crossings boundary data at one place.

    ``strata`` maps (frozenset of horizontal names, vertical name) to the
    class of the stratum Delta(A, beta); absent pairs are empty strata.
    ``integral`` lists the vertical components allowed at integral places
    (the set B^0).  Only multiplicity-one vertical components enter sums.
    """

    n: int
    horizontals: dict[str, int]                 # alpha -> rho_alpha
    verticals: list[VerticalComponent]
    strata: dict[tuple[frozenset, str], MotClass]
    integral: frozenset = frozenset()
    registry: SymbolRegistry | None = None

    def __post_init__(self):
        for alpha, rho in self.horizontals.items():
            if rho < 2:
                raise IgusaError(f"rho_{alpha} = {rho} must be >= 2")
        names = {v.name for v in self.verticals}
        if len(names) != len(self.verticals):
            raise IgusaError("duplicate vertical component names")
        b1 = self.b1_names()
        for (aset, beta), cls in self.strata.items():
            if not aset <= set(self.horizontals):
                raise IgusaError(f"stratum set {set(aset)} has unknown components")
            if beta not in b1:
                raise IgusaError(
                    f"stratum attached to {beta}, which is not multiplicity one")
            d, _ = dim_nu(cls, self.registry)
            if d != self.n - len(aset):
                raise IgusaError(
                    f"stratum Delta({sorted(aset)},{beta}) has dim {d}, "
                    f"expected {self.n - len(aset)}")
        if not self.integral <= names:
            raise IgusaError("integral designation names unknown verticals")

    def b1_names(self) -> set[str]:
        return {v.name for v in self.verticals if v.multiplicity == 1}

    def b1(self) -> list[VerticalComponent]:
        return [v for v in self.verticals if v.multiplicity == 1]

    def vertical(self, name: str) -> VerticalComponent:
        for v in self.verticals:
            if v.name == name:
                return v
        raise IgusaError(f"no vertical component named {name}")

    def alphas(self) -> list[str]:
        return sorted(self.horizontals)

    def stratum(self, aset: frozenset, beta: str) -> MotClass:
        return self.strata.get((frozenset(aset), beta), MOT_ZERO)

    def present_faces(self) -> set[frozenset]:
        """Downward closure of the index sets with a nonempty stratum."""
        out: set[frozenset] = set()
        for (aset, _beta), cls in self.strata.items():
            if cls.is_zero():
                continue
            for k in range(len(aset) + 1):
                for sub in itertools.combinations(sorted(aset), k):
                    out.add(frozenset(sub))
        return out


@dataclass
class ClemensComplex:
    """Faces of the boundary incidence complex (nonempty strata only)."""

    vertices: list[str]
    faces: list[frozenset]
    maximal_faces: list[frozenset]

    @property
    def dimension(self) -> int:
        """Simplicial dimension: max |A| - 1, or -1 when empty."""
        return max((len(f) for f in self.faces), default=0) - 1

    @property
    def pole_count(self) -> int:
        """d_v = 1 + dimension, the pole-order contribution of the place."""
        return self.dimension + 1


def clemens(datum: BoundaryDatum) -> ClemensComplex:
    faces = sorted((f for f in datum.present_faces() if f),
                   key=lambda f: (len(f), sorted(f)))
    maximal = [f for f in faces
               if not any(f < g for g in faces)]
    vertices = sorted({a for f in faces for a in f})
    return ClemensComplex(vertices, faces, maximal)


def _one_minus_linv() -> MotClass:
    return MOT_ONE - MotClass.L_power(-1)


def local_Z_trivial(datum: BoundaryDatum) -> RationalMotSeries:
    """The trivial-character local zeta function as one rational form.

    Variables are the horizontal names in sorted order; the denominator
    carries (1 - L^(rho_alpha - 1) T_alpha) exactly for the alpha lying on
    some nonempty face.
    """
    variables = [f"T_{a}" for a in datum.alphas()]
    idx = {a: i for i, a in enumerate(datum.alphas())}
    complex_ = clemens(datum)
    den_alphas = sorted({a for f in complex_.faces for a in f})
    num = LaurentPolyMot(variables, {})
    one_minus = _one_minus_linv()
    for (aset, beta), cls in sorted(datum.strata.items(),
                                    key=lambda kv: (sorted(kv[0][0]), kv[0][1])):
        if cls.is_zero():
            continue
        vert = datum.vertical(beta)
        coeff = (MotClass.L_power(vert.rho) * cls
                 * MotClass.L_power(-datum.n + len(aset))
                 * one_minus ** len(aset))
        exps = [0] * len(variables)
        for a in datum.alphas():
            exps[idx[a]] += vert.e_at(a)
        for a in aset:
            exps[idx[a]] += 1
            coeff = coeff * MotClass.L_power(datum.horizontals[a] - 1)
        term = LaurentPolyMot.monomial(variables, tuple(exps), coeff)
        # complete the common denominator with the factors alpha not in A
        for a in den_alphas:
            if a not in aset:
                term = term * _den_factor_poly(variables, idx, a,
                                               datum.horizontals[a])
        num = num + term
    factors = [Factor(datum.horizontals[a] - 1, _unit_vec(variables, idx, a), 1)
               for a in den_alphas]
    return RationalMotSeries(num, factors)


def _unit_vec(variables, idx, a) -> tuple[int, ...]:
    v = [0] * len(variables)
    v[idx[a]] = 1
    return tuple(v)


def _den_factor_poly(variables, idx, a, rho) -> LaurentPolyMot:
    one = LaurentPolyMot.constant(variables, MOT_ONE)
    mono = LaurentPolyMot.monomial(variables, _unit_vec(variables, idx, a),
                                   -MotClass.L_power(rho - 1))
    return one + mono


def grouped_by_maximal_face(datum: BoundaryDatum
                            ) -> dict[frozenset, RationalMotSeries]:
    """Regrouped form: one summand P_A(T) / prod_{alpha in A}(1 - L^.. T_a)
    per maximal face, each present face assigned to a canonical maximal one.
    """
    variables = [f"T_{a}" for a in datum.alphas()]
    idx = {a: i for i, a in enumerate(datum.alphas())}
    complex_ = clemens(datum)
    maximal = sorted(complex_.maximal_faces, key=lambda f: sorted(f))
    assign: dict[frozenset, frozenset] = {}
    for f in sorted(datum.present_faces(), key=lambda f: (len(f), sorted(f))):
        assign[f] = next((m for m in maximal if f <= m), frozenset())
    groups: dict[frozenset, LaurentPolyMot] = {}
    one_minus = _one_minus_linv()
    for (aset, beta), cls in sorted(datum.strata.items(),
                                    key=lambda kv: (sorted(kv[0][0]), kv[0][1])):
        if cls.is_zero():
            continue
        home = assign[frozenset(aset)]
        vert = datum.vertical(beta)
        coeff = (MotClass.L_power(vert.rho) * cls
                 * MotClass.L_power(-datum.n + len(aset))
                 * one_minus ** len(aset))
        exps = [0] * len(variables)
        for a in datum.alphas():
            exps[idx[a]] += vert.e_at(a)
        for a in aset:
            exps[idx[a]] += 1
            coeff = coeff * MotClass.L_power(datum.horizontals[a] - 1)
        term = LaurentPolyMot.monomial(variables, tuple(exps), coeff)
        for a in home:
            if a not in aset:
                term = term * _den_factor_poly(variables, idx, a,
                                               datum.horizontals[a])
        groups[home] = groups.get(home, LaurentPolyMot(variables, {})) + term
    return {home: RationalMotSeries(
        num, [Factor(datum.horizontals[a] - 1, _unit_vec(variables, idx, a), 1)
              for a in sorted(home)])
        for home, num in groups.items()}


def local_Z_integral_place(datum: BoundaryDatum) -> LaurentPolyMot:
    """Z(T, 0) at an integral place: the A = emptyset, beta in B^0 polynomial."""
    if not datum.integral:
        raise IgusaError("no vertical components designated integral (B^0 empty)")
    variables = [f"T_{a}" for a in datum.alphas()]
    idx = {a: i for i, a in enumerate(datum.alphas())}
    num = LaurentPolyMot(variables, {})
    for beta in sorted(datum.integral):
        vert = datum.vertical(beta)
        if vert.multiplicity != 1:
            continue
        cls = datum.stratum(frozenset(), beta)
        if cls.is_zero():
            continue
        coeff = (MotClass.L_power(vert.rho) * cls * MotClass.L_power(-datum.n))
        exps = tuple(vert.e_at(a) for a in datum.alphas())
        num = num + LaurentPolyMot.monomial(variables, exps, coeff)
    return num


def integral_place_constant(datum: BoundaryDatum) -> MotClass:
    """Z_lambda(L^-1, 0) at an integral place: substitute T_a -> L^(1-rho_a)."""
    poly = local_Z_integral_place(datum)
    total = MOT_ZERO
    for exps, c in poly.coeffs.items():
        shift = sum(e * (1 - datum.horizontals[a])
                    for e, a in zip(exps, datum.alphas()))
        total = total + c * MotClass.L_power(shift)
    return total


@dataclass
class ExponentialDenominator:
    """Denominator support after twisting by e(f) with polar multiplicities."""

    subcomplex: ClemensComplex
    raw_factors: list[str]           # 1 - L^-1 T_alpha, per surviving alpha
    height_factors: list[Factor]     # after T_alpha -> L^rho_alpha T_alpha
    dropped: list[str]


def igusa_with_exponential(datum: BoundaryDatum,
                           polar: dict[str, int]) -> ExponentialDenominator:
    """Denominator support of the Igusa integral with exponential e(f).

    Only vertices with d_alpha = 0 survive: the subcomplex they span inside
    the Clemens complex determines the guaranteed denominator, a subset of
    the trivial-character one, strict exactly when some polar multiplicity
    is positive on a face.
    """
    for a in polar:
        if a not in datum.horizontals:
            raise IgusaError(f"polar multiplicity for unknown component {a}")
    if any(m < 0 for m in polar.values()):
        raise IgusaError("polar multiplicities must be >= 0")
    complex_ = clemens(datum)
    keep = {a for a in complex_.vertices if polar.get(a, 0) == 0}
    faces = [f for f in complex_.faces if f <= keep]
    maximal = [f for f in faces if not any(f < g for g in faces)]
    sub = ClemensComplex(sorted(keep), faces, maximal)
    surviving = sorted({a for f in faces for a in f})
    variables = [f"T_{a}" for a in datum.alphas()]
    idx = {a: i for i, a in enumerate(datum.alphas())}
    height = [Factor(datum.horizontals[a] - 1, _unit_vec(variables, idx, a), 1)
              for a in surviving]
    dropped = sorted(set(complex_.vertices) - set(surviving))
    raw = [f"1 - L^-1*T_{a}" for a in surviving]
    return ExponentialDenominator(sub, raw, height, dropped)


@dataclass
class LeadingConstant:
    value: MotClass
    per_place: dict[str, MotClass]
    diagnostics: list[str]


def leading_constant(bad_places: dict[str, BoundaryDatum],
                     integral_places: dict[str, BoundaryDatum],
                     a: int, registry: SymbolRegistry | None = None
                     ) -> LeadingConstant:
    """Value of (1 - L^a T^a)^d Z_lambda(T, 0) at T = L^-1 (global factor aside).

    Per bad place, sums over the maximal faces of full dimension the
    stratum expression evaluated at T_alpha = L^(1-rho_alpha), scaled by
    prod a/(rho_alpha - 1); integral places contribute their constants.
    The result is zero (with a diagnostic) when some place has only empty
    top-dimensional strata.
    """
    diagnostics: list[str] = []
    per_place: dict[str, MotClass] = {}
    total = MOT_ONE
    one_minus = _one_minus_linv()
    for label, datum in sorted(bad_places.items()):
        complex_ = clemens(datum)
        d_v = complex_.pole_count
        faces = [f for f in complex_.maximal_faces if len(f) == d_v]
        if d_v == 0:
            faces = [frozenset()]
        place_sum = MOT_ZERO
        for face in faces:
            for alpha in face:
                if a % (datum.horizontals[alpha] - 1):
                    raise IgusaError(
                        f"a = {a} is not a multiple of rho_{alpha} - 1")
            face_sum = MOT_ZERO
            for beta in sorted(datum.b1_names()):
                cls = datum.stratum(face, beta)
                if cls.is_zero():
                    continue
                vert = datum.vertical(beta)
                # T_alpha = L^(1-rho_alpha): the face's own L^(rho-1) T_alpha
                # factors become 1, the e-monomials contribute the shift.
                shift = sum((1 - datum.horizontals[al]) * vert.e_at(al)
                            for al in datum.alphas())
                term = (MotClass.L_power(vert.rho) * cls
                        * MotClass.L_power(-datum.n + len(face))
                        * MotClass.L_power(shift))
                face_sum = face_sum + term
            scale = 1
            for alpha in face:
                scale *= a // (datum.horizontals[alpha] - 1)
            place_sum = place_sum + (face_sum * one_minus ** len(face)
                                     * MotClass.from_int(scale))
        if place_sum.is_zero():
            diagnostics.append(
                f"place {label}: all top-dimensional strata are empty")
        per_place[label] = place_sum
        total = total * place_sum
    for label, datum in sorted(integral_places.items()):
        cst = integral_place_constant(datum)
        if cst.is_zero():
            diagnostics.append(f"integral place {label}: empty constant")
        per_place[label] = cst
        total = total * cst
    return LeadingConstant(total, per_place, diagnostics)


def jet_count_oracle(ord_constraints: dict[int, int], level: int, q: int,
                     n: int) -> Fraction:
    """Measure of the jet set {ord(x_c) = m_c for the constrained coords}.

    Literally enumerates all q^((level+1) n) jets to the given level and
    counts those with the prescribed coordinate valuations, scaled by
    q^(-(level+1) n).  Exact whenever level >= max constraint; this is the
    oracle for the geometric-series coefficients of local_Z_trivial.
    """
    for c, m in ord_constraints.items():
        if not 0 <= c < n:
            raise IgusaError(f"coordinate index {c} out of range")
        if m < 0:
            raise IgusaError("jet valuations must be >= 0")
        if m > level:
            raise IgusaError(
                f"jet level {level} cannot resolve ord = {m}; raise the level")
    npoints = q ** ((level + 1) * n)
    if npoints > JET_CAP:
        raise IgusaError(f"jet enumeration of size {npoints} above the cap")
    count = 0
    for jet in itertools.product(range(q), repeat=(level + 1) * n):
        ok = True
        for c, m in ord_constraints.items():
            digits = jet[c * (level + 1):(c + 1) * (level + 1)]
            v = next((i for i, d in enumerate(digits) if d), level + 1)
            if v != m:
                ok = False
                break
        if ok:
            count += 1
    return Fraction(count, npoints)
