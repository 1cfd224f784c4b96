"""Generating functions for height-bounded forests and the density limits.

``Phi_k`` counts trees of height at most ``k`` by leaves:
``Phi_0 = x`` and ``Phi_k = x + Phi_{k-1}^2``.  From it:

* ``alpha_k``: ``1/(1 - Phi_k)``, forests;
* ``gamma_k``: ``1/(1 - Phi_k)^2``, pairs of forests;
* ``beta_k``: ``Phi_k/(1 - Phi_k)^2``, marked forests, i.e. ``|BB(n, k)|``;
* ``sigma_k``: ``P/(1 - Phi_k)^2``, special occurrences,

with ``P = x^2 (Phi_k - Phi_{k-1})^2 (Phi_k - x)``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .interval import Interval

MAX_K = 20
MAX_WORK = 1 << 31


class GuardError(ValueError):
    """A size guard on polynomial degree or series work was exceeded."""


def _check_k(k: int) -> None:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > MAX_K:
        raise GuardError(f"k={k} exceeds the expansion guard {MAX_K} (degree 2^k)")


class Polynomial:
    """Dense univariate polynomial with exact (int or Fraction) coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Union[int, Fraction]]):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lowest_degree(self) -> Optional[int]:
        for i, a in enumerate(self.coeffs):
            if a:
                return i
        return None

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] + other[i] for i in range(n)])

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self[i] - other[i] for i in range(n)])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(convolve(self.coeffs, other.coeffs))

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __repr__(self) -> str:
        terms = [f"{a}*x^{i}" for i, a in enumerate(self.coeffs) if a]
        return "Polynomial(" + (" + ".join(terms) or "0") + ")"


X = Polynomial([0, 1])


def convolve(a: Sequence, b: Sequence, limit: Optional[int] = None) -> list:
    """Cauchy product of two coefficient lists, truncated to ``limit`` terms."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if limit is not None:
        n = min(n, limit)
    out = [0] * n
    for i, ai in enumerate(a):
        if not ai or i >= n:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] += ai * b[j]
    return out


_PHI_CACHE: dict[int, Polynomial] = {0: X}


def phi_polynomial(k: int) -> Polynomial:
    """Expanded ``Phi_k``; degree ``2^k``.  Only feasible for small ``k``."""
    _check_k(k)
    if k not in _PHI_CACHE:
        prev = phi_polynomial(k - 1)
        _PHI_CACHE[k] = X + prev * prev
    return _PHI_CACHE[k]


def phi_eval(k: int, x):
    """``Phi_k(x)`` by ``k`` iterations of ``y -> x + y^2``.

    Works on ints, Fractions, floats and :class:`Interval`.  Exact rationals
    double their denominator length every step, so keep ``k`` small there.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(x, Interval):
        return _phi_interval(k, x)
    y = x
    for _ in range(k):
        y = x + y * y
    return y


def _phi_interval(k: int, x: Interval) -> Interval:
    if x.lo < 0:
        y = x
        for _ in range(k):
            y = x + y.square()
        return y
    lo, hi = x.lo, x.hi
    ylo, yhi = lo, hi
    down, up = math.nextafter, math.nextafter
    inf = math.inf
    for _ in range(k):
        ylo = down(lo + down(ylo * ylo, -inf), -inf)
        yhi = up(hi + up(yhi * yhi, inf), inf)
    return Interval(ylo, yhi)


def phi_lower(k: int, x: float) -> float:
    """Certified lower bound of ``Phi_k(x)`` for a float ``x >= 0``.

    Stops early once the bound exceeds 1: ``Phi_j(x)`` grows with ``j``.
    """
    down, inf = math.nextafter, math.inf
    y = x
    for _ in range(k):
        y = down(x + down(y * y, -inf), -inf)
        if y > 1.0:
            return y
    return y


def phi_upper(k: int, x: float) -> float:
    """Certified upper bound of ``Phi_k(x)`` for a float ``x >= 0``."""
    up, inf = math.nextafter, math.inf
    y = x
    for _ in range(k):
        y = up(x + up(y * y, inf), inf)
        if y == inf:
            return y
    return y


@dataclass(frozen=True)
class RootInterval:
    k: int
    lo: float
    hi: float
    tol: float

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "lo_hex": self.lo.hex(),
            "hi_hex": self.hi.hex(),
            "lo": self.lo,
            "hi": self.hi,
            "tol": self.tol,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RootInterval":
        return cls(int(data["k"]), float.fromhex(data["lo_hex"]), float.fromhex(data["hi_hex"]), float(data["tol"]))


_XI_CACHE: dict[tuple[int, float], RootInterval] = {}


def xi(k: int, tol: float = 1e-13) -> RootInterval:
    """Certified enclosure of the positive root of ``Phi_k(x) = 1``.

    Bisection keeps ``Phi_k(lo) < 1 < Phi_k(hi)`` as rigorous float bounds;
    it stops at ``tol`` or when the endpoints are adjacent floats.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if tol <= 0:
        raise ValueError("tol must be positive")
    key = (k, tol)
    if key in _XI_CACHE:
        return _XI_CACHE[key]
    if k == 0:
        result = RootInterval(0, 1.0, 1.0, tol)
        _XI_CACHE[key] = result
        return result
    lo, hi = 0.25, 1.0
    # Phi_k(1/4) < 1/2 and Phi_k(1) >= 2 for k >= 1
    assert phi_upper(k, lo) < 1.0 and phi_lower(k, hi) > 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if phi_upper(k, mid) < 1.0:
            lo = mid
        elif phi_lower(k, mid) > 1.0:
            hi = mid
        else:
            # the rounding envelope at mid straddles 1; shrink from both sides
            lo, hi = _squeeze(k, lo, mid, hi)
            break
    result = RootInterval(k, lo, hi, tol)
    _XI_CACHE[key] = result
    return result


def _squeeze(k: int, lo: float, mid: float, hi: float) -> tuple[float, float]:
    a, b = lo, mid
    while True:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        if phi_upper(k, m) < 1.0:
            a = m
        else:
            b = m
    c, d = mid, hi
    while True:
        m = 0.5 * (c + d)
        if m <= c or m >= d:
            break
        if phi_lower(k, m) > 1.0:
            d = m
        else:
            c = m
    return a, d


def xi_interval(k: int, tol: float = 1e-13) -> Interval:
    return xi(k, tol).interval


# --- power series -------------------------------------------------------


@dataclass(frozen=True)
class SeriesTable:
    kind: str
    k: int
    coefficients: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "k", "n", "coefficient"])
        for n, c in enumerate(self.coefficients):
            w.writerow([self.kind, self.k, n, c])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SeriesTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty series table")
        kind, k = rows[0]["kind"], int(rows[0]["k"])
        coeffs = [0] * len(rows)
        for r in rows:
            coeffs[int(r["n"])] = int(r["coefficient"])
        return cls(kind, k, tuple(coeffs))


def _check_work(k: int, N: int) -> None:
    _check_k(k)
    if N < 0:
        raise ValueError("N must be nonnegative")
    if (N + 1) * (1 << k) > MAX_WORK:
        raise GuardError(f"N*2^k = {(N + 1) << k} exceeds the work guard {MAX_WORK}")


def _alpha_coeffs(k: int, N: int) -> list[int]:
    p = phi_polynomial(k).coeffs
    a = [1] + [0] * N
    for n in range(1, N + 1):
        s = 0
        for i in range(1, min(n, len(p) - 1) + 1):
            s += p[i] * a[n - i]
        a[n] = s
    return a


def series_alpha(k: int, N: int = 64) -> SeriesTable:
    """Forests with ``n`` leaves and trees of height at most ``k``, ``n <= N``."""
    _check_work(k, N)
    return SeriesTable("alpha", k, tuple(_alpha_coeffs(k, N)))


def series_gamma(k: int, N: int = 64) -> SeriesTable:
    _check_work(k, N)
    a = _alpha_coeffs(k, N)
    return SeriesTable("gamma", k, tuple(convolve(a, a, N + 1)))


def series_beta(k: int, N: int = 64) -> SeriesTable:
    """``|BB(n, k)|`` for ``n <= N``."""
    g = series_gamma(k, N)
    return SeriesTable("beta", k, tuple(_pad(convolve(phi_polynomial(k).coeffs, g.coefficients, N + 1), N + 1)))


def special_polynomial(k: int) -> Polynomial:
    """``x^2 (Phi_k - Phi_{k-1})^2 (Phi_k - x)``: the five-tree special pattern."""
    if k < 1:
        raise ValueError("special forests need k >= 1")
    _check_k(k)
    phi, prev = phi_polynomial(k), phi_polynomial(k - 1)
    top = phi - prev
    return X * X * top * top * (phi - X)


def series_sigma(k: int, N: int = 64) -> SeriesTable:
    g = series_gamma(k, N)
    P = special_polynomial(k)
    return SeriesTable("sigma", k, tuple(_pad(convolve(P.coeffs, g.coefficients, N + 1), N + 1)))


def _pad(c: list, n: int) -> list:
    return c + [0] * (n - len(c))


SERIES = {
    "alpha": series_alpha,
    "gamma": series_gamma,
    "beta": series_beta,
    "sigma": series_sigma,
}


def series(kind: str, k: int, N: int = 64) -> SeriesTable:
    try:
        fn = SERIES[kind]
    except KeyError:
        raise ValueError(f"unknown series kind {kind!r}") from None
    return fn(k, N)


def recurrence_check(k: int, table: SeriesTable) -> bool:
    """Check a coefficient table against the recurrence coming from ``Phi_k``.

    alpha-type tables must satisfy ``a(n) = sum_i p_i a(n - i)`` for
    ``n >= 1`` (so that ``(1 - Phi_k) A = 1``); gamma tables must equal the
    convolution square of the alpha table; beta and sigma tables must equal
    the corresponding products with the gamma table.
    """
    p = phi_polynomial(k).coeffs
    m = len(p) - 1
    c = table.coefficients
    if len(c) < min(2 * m + 1, 2):
        raise ValueError(f"need at least {2 * m + 1} coefficients")
    N = len(c) - 1
    if table.kind in ("alpha", "custom"):
        for n in range(m, N + 1):
            if c[n] != sum(p[i] * c[n - i] for i in range(1, m + 1)):
                return False
        if table.kind == "alpha":
            return c[0] == 1 and all(c[n] == sum(p[i] * c[n - i] for i in range(1, min(n, m) + 1)) for n in range(1, m))
        return True
    alpha = _alpha_coeffs(k, N)
    gamma = convolve(alpha, alpha, N + 1)
    if table.kind == "gamma":
        expected = gamma
    elif table.kind == "beta":
        expected = _pad(convolve(p, gamma, N + 1), N + 1)
    elif table.kind == "sigma":
        expected = _pad(convolve(special_polynomial(k).coeffs, gamma, N + 1), N + 1)
    else:
        raise ValueError(f"unknown table kind {table.kind!r}")
    return list(c) == list(expected)


def ratio_deviations(table: SeriesTable, target: float) -> list[tuple[int, float]]:
    """``|c(n-1)/c(n) - target|`` for every ``n`` with ``c(n) > 0``."""
    c = table.coefficients
    return [(n, abs(Fraction(c[n - 1], c[n]) - Fraction(target)).__float__()) for n in range(1, len(c)) if c[n]]


def ratio_limit_check(table: SeriesTable, k: int, window: int = 10, denominator: Optional[SeriesTable] = None) -> float:
    """Largest deviation over the last ``window`` coefficients.

    Without ``denominator``: deviation of ``c(n-1)/c(n)`` from the root of
    ``Phi_k = 1``.  With ``denominator = gamma``: deviation of
    ``c(n)/gamma(n)`` from ``P(xi_k)`` for the special polynomial ``P``.
    """
    root = xi(k).interval.mid
    c = table.coefficients
    N = len(c) - 1
    start = max(1, N - window + 1)
    if denominator is None:
        devs = [abs(c[n - 1] / c[n] - root) for n in range(start, N + 1)]
    else:
        target = p_at_xi(k).mid
        devs = [abs(c[n] / denominator[n] - target) for n in range(start, N + 1)]
    return max(devs)


# --- closed forms at the root ------------------------------------------


def _ensure_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.exact(x)


def p_closed_form(x: Interval) -> Interval:
    """``x^2 (1 - sqrt(1 - x))^2 (1 - x)``, the special polynomial on ``Phi_k(x) = 1``."""
    x = _ensure_interval(x)
    one = Interval.exact(1)
    s = one - (one - x).sqrt()
    return x.square() * s.square() * (one - x)


def p_at_xi(k: int, tol: float = 1e-13) -> Interval:
    """Enclosure of ``P(xi_k)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return p_closed_form(xi_interval(k, tol))


def p_limit() -> Interval:
    """``p = (3/64)(1 - sqrt(3)/2)^2``, the limit of ``P(xi_k)``."""
    one = Interval.exact(1)
    s = one - Interval.exact(3).sqrt() / 2
    return Interval.exact(Fraction(3, 64)) * s.square()


def prob_marked_height_k(k: int, tol: float = 1e-13) -> Interval:
    """Limit fraction of BB(n, k) vertices whose marked tree has height ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    one = Interval.exact(1)
    return one - (one - xi_interval(k, tol)).sqrt()


def density_limit_bb(k: int, tol: float = 1e-13) -> Interval:
    """``4 - 2 xi_k``: limit density of BB(n, k) over {x0, x1}."""
    return Interval.exact(4) - 2 * xi_interval(k, tol)


def density_limit_bb_three(k: int, tol: float = 1e-13) -> Interval:
    """``6 - 4 xi_k``: limit density of BB(n, k) over {x0, x1, x2}."""
    return Interval.exact(6) - 4 * xi_interval(k, tol)


def density_limit_bb_prime(k: int, tol: float = 1e-13) -> Interval:
    """``(4 - 2 xi - 10 P(xi)) / (1 - 3 P(xi))``: limit after surgery, two generators."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = xi_interval(k, tol)
    P = p_closed_form(x)
    return (Interval.exact(4) - 2 * x - 10 * P) / (Interval.exact(1) - 3 * P)


def density_limit_thm2(k: int, tol: float = 1e-13) -> Interval:
    """``(6 - 4 xi - 14 P(xi)) / (1 - 3 P(xi))``: limit after surgery, three generators."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x = xi_interval(k, tol)
    P = p_closed_form(x)
    return (Interval.exact(6) - 4 * x - 14 * P) / (Interval.exact(1) - 3 * P)


def limit_bb_prime_infinity() -> Interval:
    """``3.5 + 0.5 p / (1 - 3 p)``."""
    p = p_limit()
    return Interval.exact(Fraction(7, 2)) + (p / 2) / (1 - 3 * p)


def limit_thm2_infinity() -> Interval:
    """``5 + p / (1 - 3 p)``."""
    p = p_limit()
    return Interval.exact(5) + p / (1 - 3 * p)


def minimal_k_exceeding(threshold: float, limit=density_limit_bb_prime, k_max: int = 5000) -> Optional[int]:
    """Smallest ``k <= k_max`` whose certified limit exceeds ``threshold``."""
    for k in range(1, k_max + 1):
        if limit(k).certainly_gt(threshold):
            return k
    return None


def xi_fit_exponent(ks: Sequence[int]) -> float:
    """Least-squares slope of ``log(xi_k - 1/4)`` against ``log k``."""
    xs = [math.log(k) for k in ks]
    ys = [math.log(xi(k).interval.mid - 0.25) for k in ks]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    num = sum((a - mx) * (b - my) for a, b in zip(xs, ys))
    den = sum((a - mx) ** 2 for a in xs)
    return num / den


# --- exact inequality chain --------------------------------------------


class _Fixed:
    """Rational enclosure with denominator ``2^bits``, rounded outward.

    ``lo`` and ``hi`` are integer numerators; every value handled here is
    nonnegative, which keeps squaring monotone.
    """

    __slots__ = ("lo", "hi", "bits")

    def __init__(self, lo: int, hi: int, bits: int):
        self.lo, self.hi, self.bits = lo, hi, bits

    @classmethod
    def of(cls, q: Fraction, bits: int) -> "_Fixed":
        scaled = q * (1 << bits)
        return cls(math.floor(scaled), math.ceil(scaled), bits)

    def lower(self) -> Fraction:
        return Fraction(self.lo, 1 << self.bits)

    def upper(self) -> Fraction:
        return Fraction(self.hi, 1 << self.bits)


def phi_fixed(k: int, x: Fraction, bits: int = 512, cap: Optional[Fraction] = None) -> tuple[Fraction, Optional[Fraction]]:
    """Rational bounds ``(lower, upper)`` on ``Phi_k(x)`` for ``x >= 0``.

    Exact when ``Phi_k(x)`` is representable with ``bits`` fractional bits;
    otherwise each squaring is rounded outward to that grid.  Once the lower
    bound passes ``cap`` iteration stops and ``upper`` is None: the iterates
    only grow, so ``Phi_k(x) > cap`` is already certain.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    fx = _Fixed.of(x, bits)
    lo, hi = fx.lo, fx.hi
    limit = None if cap is None else math.ceil(cap * (1 << bits))
    for _ in range(k):
        lo = fx.lo + ((lo * lo) >> bits)
        hi = fx.hi + -((-(hi * hi)) >> bits)
        if limit is not None and lo > limit:
            return Fraction(lo, 1 << bits), None
    return Fraction(lo, 1 << bits), Fraction(hi, 1 << bits)


def w_coefficient(k: int) -> Fraction:
    """``(k + 4)/3 - 2/((k + 2)(k + 3))``, the slope lower bound at ``x = 1/4``."""
    return Fraction(k + 4, 3) - Fraction(2, (k + 2) * (k + 3))


@dataclass
class BoundReport:
    k_max: int
    checked: int
    first_failure: Optional[tuple[int, str]]
    ok: bool

    def to_json(self) -> dict:
        return {"k_max": self.k_max, "checked": self.checked, "first_failure": self.first_failure, "ok": self.ok}


def bound_suite(k_max: int, bits: int = 512, start: int = 1) -> BoundReport:
    """Verify the root-location inequality chain for ``start <= k <= k_max``.

    (a) Phi_k(1/4) < 1/2
    (b) Phi_k(1/4) >= 1/2 - 1/(k+4)
    (c) Phi_k(1/4 + e) >= Phi_k(1/4) + w_k e for e in {3/(2k), 1/k^2, 1/2^k}
    (d) Phi_k(1/4 + 3/(2k)) > 1

    Exact rational arithmetic for small ``k``; beyond that, rational bounds on
    a ``2^-bits`` grid rounded outward, so every pass is a proof.
    """
    quarter = Fraction(1, 4)
    checked = 0
    for k in range(start, k_max + 1):
        exact = k <= 8

        def lower(x: Fraction, cap: Fraction) -> Fraction:
            if exact:
                return phi_eval(k, x)
            return phi_fixed(k, x, bits, cap)[0]

        if exact:
            base_lo = base_hi = phi_eval(k, quarter)
        else:
            base_lo, base_hi = phi_fixed(k, quarter, bits)
        if not base_hi < Fraction(1, 2):
            return BoundReport(k_max, checked, (k, "a"), False)
        if not base_lo >= Fraction(1, 2) - Fraction(1, k + 4):
            return BoundReport(k_max, checked, (k, "b"), False)
        w = w_coefficient(k)
        for eps in (Fraction(3, 2 * k), Fraction(1, k * k), Fraction(1, 1 << k)):
            target = base_hi + w * eps
            if not lower(quarter + eps, target) >= target:
                return BoundReport(k_max, checked, (k, f"c eps={eps}"), False)
        if not lower(quarter + Fraction(3, 2 * k), Fraction(1)) > 1:
            return BoundReport(k_max, checked, (k, "d"), False)
        checked += 1
    return BoundReport(k_max, checked, None, True)


def root_interval_json(r: RootInterval) -> str:
    return json.dumps(r.to_json(), sort_keys=True)
