"""Finite-field realization of local harmonic analysis on F_q((t))^n.

Functions live on finite windows t^M R / t^N R per coordinate; values are
exact cyclotomic integers.  The Fourier kernel comes from a residue
pairing r (built from a local expansion of a differential form), and two
function representations are supported:

* :class:`SBLocal` -- a dense, total table on the window;
* :class:`AffineCharacterFn` -- q^(-k) psi(u.x + c0) on an affine subspace
  of the digit space, closed under Fourier transform with tiny cost.

The dense transform uses a precomputed bilinear exponent kernel (numpy)
and is the brute-force side of every identity; the affine form is the
closed-form side used where dense tables would be astronomically large.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cycint import CycValue
from .polyops import fp_rref, fp_solve_affine

WINDOW_CAP = 10 ** 6
DENSE_KERNEL_CAP = 4 * 10 ** 6

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13}


class LocalError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteLaurent:
    """Exact finite Laurent polynomial sum digits[i] t^(ord+i), digits mod p.

    Digits outside the stored range are exactly zero; this is the config
    literal {"ord": o, "digits": [...]} and the carrier for centers,
    oscillatory amplitudes and differential-form expansions.
    """

    ord: int
    digits: tuple[int, ...]

    @staticmethod
    def make(ord: int, digits, p: int) -> "FiniteLaurent":
        ds = [d % p for d in digits]
        while ds and ds[0] == 0:
            ds.pop(0)
            ord += 1
        while ds and ds[-1] == 0:
            ds.pop()
        if not ds:
            return FiniteLaurent(0, ())
        return FiniteLaurent(ord, tuple(ds))

    def is_zero(self) -> bool:
        return not self.digits

    def digit(self, i: int) -> int:
        j = i - self.ord
        return self.digits[j] if 0 <= j < len(self.digits) else 0

    def shift(self, k: int) -> "FiniteLaurent":
        return FiniteLaurent(self.ord + k, self.digits) if self.digits else self

    def neg(self, p: int) -> "FiniteLaurent":
        return FiniteLaurent.make(self.ord, [(-d) % p for d in self.digits], p)


class ResiduePairing:
    """Linear form r(x) = residue-style coefficient extraction against omega.

    ``omega`` is anything with ``ord`` and ``digit(i)`` (the local expansion
    of f where the form is f dt in the local parameter); then
    r(t^s) = f_{-1-s} and the conductor nu = -ord(f) is the pole order:
    r vanishes on t^nu R and not on t^(nu-1) R.
    """

    def __init__(self, q: int, omega):
        if q not in _SMALL_PRIMES:
            raise LocalError(f"q = {q} must be one of the supported primes")
        if hasattr(omega, "is_zero") and omega.is_zero():
            raise LocalError("pairing form must be nonzero")
        self.q = q
        self.omega = omega
        self.conductor = -omega.ord

    def rt(self, s: int) -> int:
        """r(t^s) in F_q."""
        return self.omega.digit(-1 - s) % self.q

    def bilinear_block(self, window: "LocalWindow",
                       dual: "LocalWindow") -> np.ndarray:
        """Matrix R with r(x y) = sum over coords of x_c . R . y_c."""
        w, wd = window.width, dual.width
        out = np.zeros((w, wd), dtype=np.int64)
        for i in range(w):
            for j in range(wd):
                out[i, j] = self.rt(window.M + i + dual.M + j)
        return out

    def dual_window(self, window: "LocalWindow") -> "LocalWindow":
        return LocalWindow(window.q, window.n,
                           self.conductor - window.N, self.conductor - window.M)


def oscillatory_pairing(q: int) -> ResiduePairing:
    """The dt/t pairing: r(1) = 1 and r(t^s) = 0 otherwise; conductor 1."""
    return ResiduePairing(q, FiniteLaurent(-1, (1,)))


@dataclass(frozen=True)
class LocalWindow:
    """Window t^M R / t^N R per coordinate, n coordinates over F_q."""

    q: int
    n: int
    M: int
    N: int

    def __post_init__(self):
        if self.q not in _SMALL_PRIMES:
            raise LocalError(f"q = {self.q} must be one of the supported primes")
        if self.N < self.M or self.n < 0:
            raise LocalError("need M <= N and n >= 0")
        if self.size > WINDOW_CAP:
            raise LocalError(
                f"window carries {self.size} points, above the cap {WINDOW_CAP}")

    @property
    def width(self) -> int:
        return self.N - self.M

    @property
    def ndigits(self) -> int:
        return self.n * self.width

    @property
    def size(self) -> int:
        return self.q ** self.ndigits

    def points(self):
        return itertools.product(range(self.q), repeat=self.ndigits)

    def digit_matrix(self) -> np.ndarray:
        """All points as rows of a (size, ndigits) array, same order as points()."""
        d = self.ndigits
        ranks = np.arange(self.size, dtype=np.int64)
        cols = [(ranks // self.q ** (d - 1 - i)) % self.q for i in range(d)]
        return (np.stack(cols, axis=1) if d else
                np.zeros((self.size, 0), dtype=np.int64))

    def rank(self, point) -> int:
        r = 0
        for d in point:
            r = r * self.q + d
        return r

    def negated(self, point) -> tuple[int, ...]:
        return tuple((-d) % self.q for d in point)

    def coordinate_digits(self, point, c: int) -> tuple[int, ...]:
        w = self.width
        return tuple(point[c * w: (c + 1) * w])

    def point_from_expansions(self, expansions) -> tuple[int, ...] | None:
        """Digit vector of a field point, or None if outside t^M R^n."""
        digits = []
        for e in expansions:
            if not e.is_zero() and e.ord < self.M:
                return None
            digits.extend(e.digit(self.M + j) % self.q for j in range(self.width))
        return tuple(digits)


class SBLocal:
    """Dense Schwartz-Bruhat function: total table window point -> CycValue."""

    def __init__(self, window: LocalWindow, values: dict):
        self.window = window
        zero = CycValue.zero(window.q)
        self.values = {}
        for pt in window.points():
            self.values[pt] = values.get(pt, zero)

    @staticmethod
    def constant(window: LocalWindow, value: CycValue) -> "SBLocal":
        return SBLocal(window, {pt: value for pt in window.points()})

    @staticmethod
    def indicator(window: LocalWindow, predicate) -> "SBLocal":
        one = CycValue.one(window.q)
        return SBLocal(window, {pt: one for pt in window.points()
                                if predicate(pt)})

    def value(self, point) -> CycValue:
        return self.values[tuple(point)]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def negated_argument(self) -> "SBLocal":
        return SBLocal(self.window, {self.window.negated(pt): v
                                     for pt, v in self.values.items()})

    def scale(self, c: CycValue) -> "SBLocal":
        return SBLocal(self.window, {pt: v * c for pt, v in self.values.items()})

    def __eq__(self, other):
        return (isinstance(other, SBLocal) and self.window == other.window
                and self.values == other.values)

    def support_size(self) -> int:
        return sum(1 for v in self.values.values() if not v.is_zero())


class AffineCharacterFn:
    """q^(-qexp) psi(u.x + c0) on the solution set of A x = b (digit space).

    ``consistent`` is False for the identically zero function.  This class
    is closed under the Fourier transform, which is what keeps transforms
    of simple functions cheap at any window size.
    """

    def __init__(self, window: LocalWindow, constraints, rhs,
                 exponent, const: int = 0, qexp: int = 0,
                 consistent: bool = True):
        self.window = window
        q = window.q
        self.A = [[c % q for c in row] for row in constraints]
        self.b = [c % q for c in rhs]
        self.u = [c % q for c in exponent]
        self.c0 = const % q
        self.qexp = qexp
        self.consistent = consistent
        if len(self.u) != window.ndigits:
            raise LocalError("exponent length must match the digit space")

    @staticmethod
    def zero(window: LocalWindow) -> "AffineCharacterFn":
        return AffineCharacterFn(window, [], [], [0] * window.ndigits,
                                 consistent=False)

    @staticmethod
    def full_indicator(window: LocalWindow) -> "AffineCharacterFn":
        return AffineCharacterFn(window, [], [], [0] * window.ndigits)

    @staticmethod
    def ball(window: LocalWindow, center_digits) -> "AffineCharacterFn":
        """Characteristic function of the point/ball given by full digit pinning."""
        center = list(center_digits)
        if len(center) != window.ndigits:
            raise LocalError("center digit length mismatch")
        d = window.ndigits
        eye = [[1 if j == i else 0 for j in range(d)] for i in range(d)]
        return AffineCharacterFn(window, eye, center, [0] * d)

    def value(self, point) -> CycValue:
        q = self.window.q
        if not self.consistent:
            return CycValue.zero(q)
        for row, bi in zip(self.A, self.b):
            if sum(r * x for r, x in zip(row, point)) % q != bi:
                return CycValue.zero(q)
        e = (sum(u * x for u, x in zip(self.u, point)) + self.c0) % q
        return CycValue.zeta_power(q, e).scale_qpow(self.qexp)

    def is_zero(self) -> bool:
        if not self.consistent:
            return True
        return fp_solve_affine(self.A, self.b, self.window.q,
                               self.window.ndigits) is None

    def negated_argument(self) -> "AffineCharacterFn":
        q = self.window.q
        return AffineCharacterFn(
            self.window, [[(-c) % q for c in row] for row in self.A], self.b,
            [(-c) % q for c in self.u], self.c0, self.qexp, self.consistent)

    def to_sblocal(self) -> SBLocal:
        return SBLocal(self.window, {pt: self.value(pt)
                                     for pt in self.window.points()})

    def eval_digit_matrix(self, digmat: np.ndarray
                          ) -> tuple[np.ndarray, np.ndarray]:
        """(mask, exponent) arrays for a batch of digit rows."""
        q = self.window.q
        npts = digmat.shape[0]
        if not self.consistent:
            return np.zeros(npts, dtype=bool), np.zeros(npts, dtype=np.int64)
        mask = np.ones(npts, dtype=bool)
        if self.A:
            amat = np.array(self.A, dtype=np.int64).T
            lhs = (digmat @ amat) % q
            mask = np.all(lhs == np.array(self.b, dtype=np.int64) % q, axis=1)
        evec = np.array(self.u, dtype=np.int64)
        expo = (digmat @ evec + self.c0) % q
        return mask, expo


LocalFn = SBLocal | AffineCharacterFn


def integrate(phi: LocalFn) -> CycValue:
    """The window integral q^(-nN) sum of values; level-independent."""
    w = phi.window
    q = w.q
    if isinstance(phi, SBLocal):
        total = CycValue.zero(q)
        for v in phi.values.values():
            total = total + v
        return total.scale_qpow(w.n * w.N)
    sol = fp_solve_affine(phi.A, phi.b, q, w.ndigits)
    if not phi.consistent or sol is None:
        return CycValue.zero(q)
    x0, kernel = sol
    # sum over the affine subspace of psi(u.x + c0)
    base = (sum(u * x for u, x in zip(phi.u, x0)) + phi.c0) % q
    for kv in kernel:
        if sum(u * x for u, x in zip(phi.u, kv)) % q:
            return CycValue.zero(q)
    val = CycValue.zeta_power(q, base).scale_qpow(phi.qexp - len(kernel))
    return val.scale_qpow(w.n * w.N)


def fourier(phi: LocalFn, pairing: ResiduePairing,
            out_window: LocalWindow | None = None) -> LocalFn:
    """Fourier transform with output on the dual window (nu-N, nu-M)."""
    w = phi.window
    if pairing.q != w.q:
        raise LocalError("pairing and window have different q")
    dual = pairing.dual_window(w)
    if out_window is not None and out_window != dual:
        raise LocalError(
            f"requested output window ({out_window.M},{out_window.N}) is "
            f"inconsistent with the pairing conductor {pairing.conductor}; "
            f"expected ({dual.M},{dual.N})")
    if isinstance(phi, AffineCharacterFn):
        return _fourier_affine(phi, pairing, dual)
    return _fourier_dense(phi, pairing, dual)


def _block_bilinear(pairing: ResiduePairing, w: LocalWindow,
                    dual: LocalWindow) -> np.ndarray:
    blk = pairing.bilinear_block(w, dual)
    out = np.zeros((w.ndigits, dual.ndigits), dtype=np.int64)
    for c in range(w.n):
        out[c * w.width:(c + 1) * w.width,
            c * dual.width:(c + 1) * dual.width] = blk
    return out


def _fourier_affine(phi: AffineCharacterFn, pairing: ResiduePairing,
                    dual: LocalWindow) -> AffineCharacterFn:
    w = phi.window
    q = w.q
    if not phi.consistent:
        return AffineCharacterFn.zero(dual)
    sol = fp_solve_affine(phi.A, phi.b, q, w.ndigits)
    if sol is None:
        return AffineCharacterFn.zero(dual)
    x0, kernel = sol
    rblk = _block_bilinear(pairing, w, dual)
    dk = len(kernel)
    # F phi(y) = q^(dk - nN - qexp) psi(c0 + u.x0 + x0.R.y) on K^T(u + R y) = 0
    if dk:
        kmat = np.array(kernel, dtype=np.int64)
        a_new = (kmat @ rblk) % q
        b_new = [int(-(sum(u * k for u, k in zip(phi.u, kv)))) % q
                 for kv in kernel]
        a_rows = [list(map(int, row)) for row in a_new]
    else:
        a_rows, b_new = [], []
    x0v = np.array(x0, dtype=np.int64)
    u_new = [int(v) % q for v in (x0v @ rblk)] if w.ndigits else [0] * dual.ndigits
    c_new = (phi.c0 + sum(u * x for u, x in zip(phi.u, x0))) % q
    return AffineCharacterFn(dual, a_rows, b_new, u_new, c_new,
                             phi.qexp + w.n * w.N - dk)


def _fourier_dense(phi: SBLocal, pairing: ResiduePairing,
                   dual: LocalWindow) -> SBLocal:
    w = phi.window
    q = w.q
    if w.size * dual.size > DENSE_KERNEL_CAP:
        raise LocalError(
            f"dense Fourier kernel would need {w.size * dual.size} entries; "
            "use the affine-character representation instead")
    rblk = _block_bilinear(pairing, w, dual)
    xmat = w.digit_matrix()
    ymat = dual.digit_matrix()
    kern = (ymat @ ((rblk.T @ xmat.T) % q)) % q  # (Sy, Sx)

    # decompose phi into integer zeta-coordinate planes over a common scale
    k0 = max((v.den_exp for v in phi.values.values()), default=0)
    planes = np.zeros((w.size, q - 1), dtype=np.int64)
    for pt, v in phi.values.items():
        if v.is_zero():
            continue
        row = w.rank(pt)
        f = q ** (k0 - v.den_exp)
        for j, c in enumerate(v.coords):
            planes[row, j] = c * f
    acc = np.zeros((dual.size, q), dtype=np.int64)
    for u in range(q):
        mask = (kern == u)
        if not mask.any():
            continue
        counts = mask.astype(np.int64) @ planes  # (Sy, q-1)
        for j in range(q - 1):
            acc[:, (u + j) % q] += counts[:, j]
    out = {}
    scale = k0 + w.n * w.N
    for pt in dual.points():
        row = acc[dual.rank(pt)]
        if row.any():
            out[pt] = CycValue.make(q, row.tolist(), scale)
    return SBLocal(dual, out)


def fourier_dense_reference(phi: SBLocal, pairing: ResiduePairing) -> SBLocal:
    """Pure-Python double loop; oracle for the vectorized kernel."""
    w = phi.window
    q = w.q
    dual = pairing.dual_window(w)
    rblk = _block_bilinear(pairing, w, dual)
    out = {}
    for y in dual.points():
        total = CycValue.zero(q)
        for x, v in phi.values.items():
            if v.is_zero():
                continue
            e = 0
            for c in range(w.n):
                for i in range(w.width):
                    xi = x[c * w.width + i]
                    if xi:
                        for j in range(dual.width):
                            e += xi * rblk[i, j] * y[c * dual.width + j]
            total = total + v * CycValue.zeta_power(q, e % q)
        out[y] = total.scale_qpow(w.n * w.N)
    return SBLocal(dual, out)


def affine_functions_equal(f1: AffineCharacterFn, f2: AffineCharacterFn,
                           extra_qexp: int = 0) -> bool:
    """Exact equality of f1 and q^(-extra_qexp) f2 as functions.

    Compares solution sets through canonical row-reduced forms and the
    character data on a particular solution plus the kernel directions,
    so no enumeration is needed.
    """
    if f1.window != f2.window:
        return False
    q = f1.window.q
    nd = f1.window.ndigits
    s1 = None if not f1.consistent else fp_solve_affine(f1.A, f1.b, q, nd)
    s2 = None if not f2.consistent else fp_solve_affine(f2.A, f2.b, q, nd)
    if s1 is None or s2 is None:
        return (s1 is None) == (s2 is None)
    red1, _ = fp_rref([row + [bi] for row, bi in zip(f1.A, f1.b)] or
                      [[0] * (nd + 1)], q)
    red2, _ = fp_rref([row + [bi] for row, bi in zip(f2.A, f2.b)] or
                      [[0] * (nd + 1)], q)
    norm1 = [tuple(r) for r in red1 if any(r)]
    norm2 = [tuple(r) for r in red2 if any(r)]
    if norm1 != norm2:
        return False
    if f1.qexp != f2.qexp + extra_qexp:
        return False
    x0, kernel = s1
    e1 = (sum(u * x for u, x in zip(f1.u, x0)) + f1.c0) % q
    e2 = (sum(u * x for u, x in zip(f2.u, x0)) + f2.c0) % q
    if e1 != e2:
        return False
    for kv in kernel:
        d1 = sum(u * k for u, k in zip(f1.u, kv)) % q
        d2 = sum(u * k for u, k in zip(f2.u, kv)) % q
        if d1 != d2:
            return False
    return True


def inversion_check(phi: LocalFn, pairing: ResiduePairing) -> bool:
    """Exact check of FFphi(x) = q^(-n nu) phi(-x)."""
    w = phi.window
    ff = fourier(fourier(phi, pairing), pairing)
    expected = phi.negated_argument()
    scale = w.n * pairing.conductor
    if isinstance(ff, AffineCharacterFn) and isinstance(expected, AffineCharacterFn):
        return affine_functions_equal(ff, expected, scale)
    ff_t = ff if isinstance(ff, SBLocal) else ff.to_sblocal()
    exp_t = expected if isinstance(expected, SBLocal) else expected.to_sblocal()
    return all(ff_t.value(pt) == exp_t.value(pt).scale_qpow(scale)
               for pt in w.points())


# -- level compatibility maps (dense) -----------------------------------------


def extend_by_zero(phi: SBLocal, new_m: int) -> SBLocal:
    """iota_*: extension by zero to a wider window (new_m <= M)."""
    w = phi.window
    if new_m > w.M:
        raise LocalError("extension must lower M")
    big = LocalWindow(w.q, w.n, new_m, w.N)
    pad = w.M - new_m
    out = {}
    for pt, v in phi.values.items():
        if v.is_zero():
            continue
        coords = []
        for c in range(w.n):
            coords.extend([0] * pad)
            coords.extend(w.coordinate_digits(pt, c))
        out[tuple(coords)] = v
    return SBLocal(big, out)


def restrict(phi: SBLocal, new_m: int) -> SBLocal:
    """iota^*: restriction to a narrower window (new_m >= M)."""
    w = phi.window
    if new_m < w.M:
        raise LocalError("restriction must raise M")
    small = LocalWindow(w.q, w.n, new_m, w.N)
    cut = new_m - w.M
    out = {}
    for pt in small.points():
        coords = []
        for c in range(w.n):
            coords.extend([0] * cut)
            coords.extend(small.coordinate_digits(pt, c))
        out[pt] = phi.value(tuple(coords))
    return SBLocal(small, out)


def refine(phi: SBLocal, new_n: int) -> SBLocal:
    """pi^*: pull back to a finer level (new_n >= N); values repeat."""
    w = phi.window
    if new_n < w.N:
        raise LocalError("refinement must raise N")
    big = LocalWindow(w.q, w.n, w.M, new_n)
    out = {}
    for pt in big.points():
        coords = []
        for c in range(w.n):
            coords.extend(big.coordinate_digits(pt, c)[:w.width])
        out[pt] = phi.value(tuple(coords))
    return SBLocal(big, out)


def push_level(phi: SBLocal) -> SBLocal:
    """pi_*: sum over the top digit of each coordinate (one level down)."""
    w = phi.window
    if w.width == 0:
        raise LocalError("cannot push an (M,M) window further down")
    small = LocalWindow(w.q, w.n, w.M, w.N - 1)
    out = {pt: CycValue.zero(w.q) for pt in small.points()}
    for pt, v in phi.values.items():
        coords = []
        for c in range(w.n):
            coords.extend(w.coordinate_digits(pt, c)[:-1])
        key = tuple(coords)
        out[key] = out[key] + v
    return SBLocal(small, out)


# -- exponential sums ----------------------------------------------------------


def exp_sum_linear(dim: int, coeffs, q: int, constant: int = 0) -> CycValue:
    """sum over F_q^dim of psi(f(x)) for the affine-linear f given by coeffs.

    Computed both by literal summation and by the closed form (q^dim if the
    linear part vanishes, 0 otherwise, twisted by psi(constant)); the two
    must agree.
    """
    coeffs = [c % q for c in coeffs]
    if len(coeffs) != dim:
        raise LocalError("coefficient count must equal dim")
    total = CycValue.zero(q)
    for xs in itertools.product(range(q), repeat=dim):
        e = (sum(c * x for c, x in zip(coeffs, xs)) + constant) % q
        total = total + CycValue.zeta_power(q, e)
    if any(coeffs):
        closed = CycValue.zero(q)
    else:
        closed = CycValue.zeta_power(q, constant).scale_qpow(-dim)
    if total != closed:
        raise AssertionError("literal linear character sum disagrees with closed form")
    return total


# -- oscillatory integrals over shells -----------------------------------------


@dataclass(frozen=True)
class NeedsBaseCase:
    """Marker: ord(a) + m d = 0; only the scaling to I(0, d, .) is closed-form."""

    m: int
    d: int
    ord_a: int

    def scale_power(self) -> int:
        return -self.m


def oscillatory_I_closed(m: int, d: int, ord_a: int):
    """Closed form of the shell integral I(m, d, a) when it only sees ord(a).

    Returns a MotClass for the vanishing (ord a + m d < 0) and constant
    (ord a + m d > 0, value L^-m (1 - L^-1)) ranges, and a NeedsBaseCase
    marker on the boundary.

    The q-realization of the vanishing range needs gcd(d, q) = 1: over F_q
    with p | d the d-th power map collapses (x^d has digits only in degrees
    divisible by p) and the integral can be a nonzero constant.  The
    constant range is purely valuation-theoretic and realizes at every q.
    """
    from .grot import MOT_ONE, MOT_ZERO, MotClass
    if d < 1:
        raise LocalError("d must be a positive integer")
    s = ord_a + m * d
    if s < 0:
        return MOT_ZERO
    if s > 0:
        return MotClass.L_power(-m) * (MOT_ONE - MotClass.L_power(-1))
    return NeedsBaseCase(m, d, ord_a)


def oscillatory_depth_needed(m: int, d: int, ord_a: int) -> int:
    """Digits of x needed so that psi(r(a x^d)) is constant on residue classes."""
    return max(1, 1 - ord_a - m * d, -ord_a + m * d + 1)


def oscillatory_I_brute(m: int, d: int, a: FiniteLaurent, q: int,
                        depth: int | None = None,
                        chunk: int = 1 << 21) -> CycValue:
    """Exact shell sum I(m, d, a) = integral over ord(x) = m of psi(r(a x^d)).

    ``a`` is taken as the exact finite Laurent polynomial given; the pairing
    is the dt/t one (r reads the t^0 coefficient).  Literal summation over
    all digit representatives, vectorized in chunks.
    """
    if a.is_zero():
        raise LocalError("amplitude a must be nonzero")
    need = oscillatory_depth_needed(m, d, a.ord)
    if depth is None:
        depth = need
    if depth < need:
        raise LocalError(f"depth {depth} insufficient; need at least {need}")
    if q ** depth > 64 * chunk:
        raise LocalError(f"brute shell sum of size {q**depth} above the cap")
    counts = _osc_character_counts(a, q, d, m, [], depth, lead_nonzero=True,
                                   chunk=chunk)
    total = CycValue.make(q, counts, m + depth)
    return total


def shell_hypothesis_holds(ord_a: int, n: int) -> bool:
    return ord_a + n <= 0 < ord_a + 2 * n


def shell_vanishing_check(a: FiniteLaurent, n: int, d: int,
                          xi: FiniteLaurent, q: int) -> bool:
    """Brute-force that the integral of psi(r(a x^d)) over xi + t^n R is 0.

    Requires the decay hypothesis ord(a) + n <= 0 < ord(a) + 2n; violations
    raise, so the harness can use them as negative controls via
    :func:`ball_oscillatory_brute`.  The vanishing itself realizes at q
    only for gcd(d, q) = 1 (see :func:`oscillatory_I_closed`).
    """
    if not shell_hypothesis_holds(a.ord, n):
        raise LocalError(
            f"hypothesis ord(a)+n <= 0 < ord(a)+2n fails (ord a = {a.ord}, n = {n})")
    return ball_oscillatory_brute(a, n, d, xi, q).is_zero()


def ball_oscillatory_brute(a: FiniteLaurent, n: int, d: int,
                           xi: FiniteLaurent, q: int) -> CycValue:
    """Exact integral of psi(r(a x^d)) over the ball xi + t^n R (xi a unit)."""
    if xi.ord != 0:
        raise LocalError("xi must be a unit (ord 0)")
    if n < 1:
        raise LocalError("n must be >= 1")
    prefix = [xi.digit(i) % q for i in range(n)]
    free = max(1, -a.ord - n + 1)
    counts = _osc_character_counts(a, q, d, 0, prefix, n + free,
                                   lead_nonzero=False)
    return CycValue.make(q, counts, n + free)


def _osc_character_counts(a: FiniteLaurent, q: int, d: int, m: int,
                          prefix: list[int], depth: int,
                          lead_nonzero: bool, chunk: int = 1 << 21
                          ) -> list[int]:
    """Counts of psi-exponents of r(a x^d) over digit grids of x.

    x = sum_{i<depth} x_i t^(m+i) with x_0..x_{len(prefix)-1} pinned; when
    ``lead_nonzero`` the first digit ranges over F_q^*.  Exact and literal:
    every representative is enumerated.
    """
    nfree = depth - len(prefix)
    if nfree < 0:
        raise LocalError("depth smaller than the pinned prefix")
    # (x^d) coefficients are needed at t^(d m + s) for 0 <= s <= -a.ord - d*m
    out_len = max(0, -a.ord - d * m + 1)
    counts = [0] * q
    total = q ** nfree
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        ranks = np.arange(start, stop, dtype=np.int64)
        cols = []
        for i, c in enumerate(prefix):
            cols.append(np.full(stop - start, c % q, dtype=np.int64))
        for i in range(nfree):
            cols.append((ranks // q ** (nfree - 1 - i)) % q)
        if lead_nonzero:
            if not cols:
                continue
            mask = cols[0] != 0
        else:
            mask = np.ones(stop - start, dtype=bool)
        if out_len == 0:
            expo = np.zeros(stop - start, dtype=np.int64)
        else:
            pw = [np.ones(stop - start, dtype=np.int64)] + \
                [np.zeros(stop - start, dtype=np.int64) for _ in range(out_len - 1)]
            for _ in range(d):
                nxt = [np.zeros(stop - start, dtype=np.int64)
                       for _ in range(out_len)]
                for s in range(out_len):
                    acc = nxt[s]
                    for i in range(min(s + 1, len(cols))):
                        acc += pw[s - i] * cols[i]
                    nxt[s] = acc % q
                pw = nxt
            expo = np.zeros(stop - start, dtype=np.int64)
            for s in range(out_len):
                coef = a.digit(-d * m - s)
                if coef:
                    expo += coef * pw[s]
            expo %= q
        bc = np.bincount(expo[mask], minlength=q)
        for u in range(q):
            counts[u] += int(bc[u])
    return counts


def oscillatory_I_reference(m: int, d: int, a: FiniteLaurent, q: int,
                            depth: int) -> CycValue:
    """Pure-Python shell sum; oracle for the vectorized brute force."""
    need = oscillatory_depth_needed(m, d, a.ord)
    if depth < need:
        raise LocalError(f"depth {depth} insufficient; need at least {need}")
    total = CycValue.zero(q)
    for digits in itertools.product(range(q), repeat=depth):
        if digits[0] == 0:
            continue
        # x = sum digits[i] t^(m+i); compute r(a x^d) literally
        xd = {0: 1}  # x^0
        for _ in range(d):
            nxt: dict[int, int] = {}
            for s, c in xd.items():
                for i, dig in enumerate(digits):
                    if dig:
                        key = s + i
                        nxt[key] = (nxt.get(key, 0) + c * dig) % q
            xd = nxt
        e = 0
        for s, c in xd.items():
            e += c * a.digit(-(d * m + s))
        total = total + CycValue.zeta_power(q, e % q)
    return total.scale_qpow(m + depth)
