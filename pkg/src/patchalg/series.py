"""Truncated power series with exact coefficients.

Two containers live here:

* ``TruncSeries``: an element of K[[t]] mod t^N.  The precision N travels
  with the value: an all-zero series of precision N means "zero mod t^N",
  never "exactly zero".
* ``BivarSeries``: an element of K[[t, Y]] truncated at total degree N,
  together with Weierstrass division by elements that are t-regular of
  degree 1, and the induced prime-power order function.

Internally a series keeps one common integer denominator and per-component
integer coefficient vectors (two components for the order-4 cyclotomic
field, one otherwise).  That keeps the inner loops in machine integers; the
``Scalar`` view is materialized on demand and is exact either way.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .scalars import FieldDescriptor, FieldError, Scalar

__all__ = [
    "NonUnitError",
    "RegularityError",
    "TruncSeries",
    "BivarSeries",
    "vt",
    "poly_simple_root",
    "weierstrass_div",
    "prime_valuation",
]

INF = math.inf


class NonUnitError(ArithmeticError):
    """Attempt to invert something without an invertible constant term."""


class RegularityError(ArithmeticError):
    """Divisor violates the required regularity shape."""


def _coords_to_ints(coords) -> tuple[list[int], int]:
    """Common-denominator integer form of a tuple of Fractions."""
    den = 1
    for c in coords:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in coords], den


def _normalize(den: int, comps: list[list[int]]) -> tuple[int, tuple]:
    if den == 1:
        return 1, tuple(tuple(comp) for comp in comps)
    g = den
    for comp in comps:
        for x in comp:
            if x:
                g = gcd(g, x)
                if g == 1:
                    break
        if g == 1:
            break
    if g > 1:
        den //= g
        comps = [[x // g for x in comp] for comp in comps]
    return den, tuple(tuple(comp) for comp in comps)


def _conv(a: Sequence[int], b: Sequence[int], prec: int) -> list[int]:
    out = [0] * prec
    for i, ai in enumerate(a):
        if ai:
            for k, bj in zip(range(i, prec), b):
                if bj:
                    out[k] += ai * bj
    return out


class TruncSeries:
    """K[[t]] mod t^prec with exact coefficients.

    >>> s = TruncSeries.from_scalars(QQ_like, [1, -1], 4)   # 1 - t
    >>> s.invert_unit().coeffs   # 1 + t + t^2 + t^3
    """

    __slots__ = ("field", "prec", "den", "_c", "_z", "_vt")

    def __init__(self, field: FieldDescriptor, prec: int, den: int, comps):
        if prec < 1:
            raise ValueError("precision must be >= 1")
        self.field = field
        self.prec = prec
        self.den, self._c = _normalize(den, [list(c) for c in comps])
        self._z = None
        self._vt = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(field: FieldDescriptor, prec: int) -> "TruncSeries":
        return TruncSeries(field, prec, 1, [[0] * prec for _ in range(field.dim)])

    @staticmethod
    def from_scalars(field: FieldDescriptor, values: Iterable, prec: int) -> "TruncSeries":
        scalars = [_as_scalar(field, v) for v in values]
        if len(scalars) > prec:
            raise ValueError("more coefficients than precision allows")
        den = 1
        for s in scalars:
            for c in s.coords:
                den = den * c.denominator // gcd(den, c.denominator)
        comps = [[0] * prec for _ in range(field.dim)]
        for n, s in enumerate(scalars):
            for d, c in enumerate(s.coords):
                comps[d][n] = int(c * den)
        return TruncSeries(field, prec, den, comps)

    @staticmethod
    def constant(field: FieldDescriptor, value, prec: int) -> "TruncSeries":
        return TruncSeries.from_scalars(field, [value], prec)

    @staticmethod
    def one(field: FieldDescriptor, prec: int) -> "TruncSeries":
        return TruncSeries.constant(field, 1, prec)

    @staticmethod
    def t_power(field: FieldDescriptor, e: int, prec: int, coeff=1) -> "TruncSeries":
        if e < 0:
            raise ValueError("t_power wants a non-negative exponent")
        vals = [0] * min(e, prec) + ([coeff] if e < prec else [])
        return TruncSeries.from_scalars(field, vals, prec)

    # -- views -------------------------------------------------------------

    @property
    def precision(self) -> int:
        return self.prec

    def coeff(self, n: int) -> Scalar:
        if not 0 <= n < self.prec:
            raise IndexError(f"coefficient {n} outside precision window {self.prec}")
        return Scalar(self.field, tuple(Fraction(c[n], self.den) for c in self._c))

    @property
    def coeffs(self) -> tuple:
        return tuple(self.coeff(n) for n in range(self.prec))

    def is_zero(self) -> bool:
        z = self._z
        if z is None:
            z = self._z = not any(any(c) for c in self._c)
        return z

    def vt(self):
        """t-adic order; math.inf means "vanishes to precision" (>= prec)."""
        v = self._vt
        if v is None:
            v = INF
            for n in range(self.prec):
                if any(c[n] for c in self._c):
                    v = n
                    break
            self._vt = v
        return v

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.prec == other.prec
            and self.den == other.den
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.field, self.prec, self.den, self._c))

    def __repr__(self) -> str:
        parts = []
        for n in range(self.prec):
            s = self.coeff(n)
            if not s.is_zero():
                parts.append(f"({s})*t^{n}" if n else f"({s})")
            if len(parts) >= 6:
                parts.append("...")
                break
        body = " + ".join(parts) if parts else "0"
        return f"<{body} mod t^{self.prec}>"

    # -- arithmetic --------------------------------------------------------

    def _common(self, other: "TruncSeries") -> int:
        if self.field is not other.field and self.field != other.field:
            raise FieldError("series over different fields")
        return self.prec if self.prec <= other.prec else other.prec

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        prec = self._common(other)
        g = gcd(self.den, other.den)
        den = self.den // g * other.den
        f1, f2 = other.den // g, self.den // g
        comps = [
            [f1 * a + f2 * b for a, b in zip(ca[:prec], cb[:prec])]
            for ca, cb in zip(self._c, other._c)
        ]
        return TruncSeries(self.field, prec, den, comps)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.field, self.prec, self.den, [[-x for x in c] for c in self._c])

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        prec = self._common(other)
        den = self.den * other.den
        if self.field.dim == 1:
            comps = [_conv(self._c[0], other._c[0], prec)]
        else:
            a_re, a_im = self._c
            b_re, b_im = other._c
            re = _conv(a_re, b_re, prec)
            for k, x in enumerate(_conv(a_im, b_im, prec)):
                re[k] -= x
            im = _conv(a_re, b_im, prec)
            for k, x in enumerate(_conv(a_im, b_re, prec)):
                im[k] += x
            comps = [re, im]
        return TruncSeries(self.field, prec, den, comps)

    def scale(self, s: Scalar) -> "TruncSeries":
        if s.field != self.field:
            raise FieldError("scalar over a different field")
        nums, sden = _coords_to_ints(s.coords)
        den = self.den * sden
        if self.field.dim == 1:
            comps = [[nums[0] * x for x in self._c[0]]]
        else:
            a, b = nums
            re, im = self._c
            comps = [
                [a * x - b * y for x, y in zip(re, im)],
                [a * y + b * x for x, y in zip(re, im)],
            ]
        return TruncSeries(self.field, self.prec, den, comps)

    def shift_up(self, e: int) -> "TruncSeries":
        """Multiply by t^e (e >= 0); precision window unchanged."""
        if e < 0:
            raise ValueError("shift_up wants e >= 0")
        if e == 0:
            return self
        comps = [[0] * e + list(c[: self.prec - e]) for c in self._c]
        return TruncSeries(self.field, self.prec, self.den, comps)

    def shift_down(self, e: int) -> "TruncSeries":
        """Exact division by t^e; needs vt >= e and costs e precision."""
        if e < 0:
            raise ValueError("shift_down wants e >= 0")
        if e == 0:
            return self
        if self.prec - e < 1:
            raise ValueError("shift_down would exhaust the precision window")
        if any(any(c[:e]) for c in self._c):
            raise NonUnitError(f"series not divisible by t^{e} (vt = {self.vt()})")
        comps = [list(c[e:]) for c in self._c]
        return TruncSeries(self.field, self.prec - e, self.den, comps)

    def truncate(self, prec: int) -> "TruncSeries":
        if prec >= self.prec:
            return self
        return TruncSeries(self.field, prec, self.den, [c[:prec] for c in self._c])

    def invert_unit(self) -> "TruncSeries":
        """Inverse mod t^prec of a series with invertible constant term."""
        c0 = self.coeff(0)
        if c0.is_zero():
            raise NonUnitError("no inverse: constant coefficient is zero")
        x = TruncSeries.constant(self.field, c0.inverse(), self.prec)
        two = TruncSeries.constant(self.field, 2, self.prec)
        for _ in range(max(1, math.ceil(math.log2(self.prec)))):
            x = x * (two - self * x)
        return x


def _as_scalar(field: FieldDescriptor, v) -> Scalar:
    if isinstance(v, Scalar):
        if v.field != field:
            raise FieldError("scalar over a different field")
        return v
    return Scalar.of(field, v)


def vt(a: TruncSeries):
    return a.vt()


def poly_eval(coeffs: Sequence[TruncSeries], x: TruncSeries) -> TruncSeries:
    """Horner evaluation of a polynomial with TruncSeries coefficients."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def poly_simple_root(coeffs: Sequence[TruncSeries], z0: Scalar) -> TruncSeries:
    """Newton lift of a simple mod-t root z0 of a polynomial over K[[t]].

    coeffs lists p_0, ..., p_d.  Requires p(z0) = 0 mod t and p'(z0)
    invertible mod t; the returned lambda satisfies p(lambda) = 0 mod t^prec
    and lambda = z0 mod t (verified before returning).
    """
    if len(coeffs) < 2:
        raise ValueError("polynomial must have degree >= 1")
    field = coeffs[0].field
    prec = min(c.prec for c in coeffs)
    coeffs = [c.truncate(prec) for c in coeffs]
    p0 = sum((c.coeff(0) * z0 ** n for n, c in enumerate(coeffs)), Scalar.zero(field))
    if not p0.is_zero():
        raise RegularityError(f"{z0} is not a root of the reduction mod t")
    dp0 = sum(
        (Scalar.of(field, n) * c.coeff(0) * z0 ** (n - 1) for n, c in enumerate(coeffs) if n),
        Scalar.zero(field),
    )
    if dp0.is_zero():
        raise RegularityError(f"{z0} is not a simple root mod t")
    deriv = [c.scale(Scalar.of(field, n)) for n, c in enumerate(coeffs) if n]
    lam = TruncSeries.constant(field, z0, prec)
    for _ in range(max(1, math.ceil(math.log2(prec))) + 1):
        lam = lam - poly_eval(coeffs, lam) * poly_eval(deriv, lam).invert_unit()
    residue = poly_eval(coeffs, lam)
    if not residue.is_zero():
        raise ArithmeticError("Newton iteration failed to converge (internal bug)")
    return lam


# ---------------------------------------------------------------------------
# bivariate layer
# ---------------------------------------------------------------------------


class BivarSeries:
    """K[[t, Y]] truncated at total degree prec.

    Stored entries are indexed by (t-exponent, Y-exponent) with exponent sum
    below prec; everything at or beyond the cut is identically dropped.
    """

    __slots__ = ("field", "prec", "den", "_c")

    def __init__(self, field: FieldDescriptor, prec: int, den: int, comps):
        if prec < 1:
            raise ValueError("precision must be >= 1")
        self.field = field
        self.prec = prec
        self.den, self._c = _normalize(den, [list(c) for c in comps])

    @staticmethod
    def zero(field: FieldDescriptor, prec: int) -> "BivarSeries":
        size = prec * prec
        return BivarSeries(field, prec, 1, [[0] * size for _ in range(field.dim)])

    @staticmethod
    def from_terms(field: FieldDescriptor, terms: dict, prec: int) -> "BivarSeries":
        """terms maps (t-exp, Y-exp) -> coefficient; entries past the cut are dropped."""
        scalars = {k: _as_scalar(field, v) for k, v in terms.items()}
        den = 1
        for s in scalars.values():
            for c in s.coords:
                den = den * c.denominator // gcd(den, c.denominator)
        comps = [[0] * (prec * prec) for _ in range(field.dim)]
        for (it, iy), s in scalars.items():
            if it < 0 or iy < 0:
                raise ValueError("negative exponents are not representable here")
            if it + iy >= prec:
                continue
            for d, c in enumerate(s.coords):
                comps[d][it * prec + iy] = int(c * den)
        return BivarSeries(field, prec, den, comps)

    # -- views -------------------------------------------------------------

    @property
    def precision(self) -> int:
        return self.prec

    def coeff(self, it: int, iy: int) -> Scalar:
        if it + iy >= self.prec or it < 0 or iy < 0:
            raise IndexError("exponent pair outside the truncation window")
        idx = it * self.prec + iy
        return Scalar(self.field, tuple(Fraction(c[idx], self.den) for c in self._c))

    def terms(self):
        P = self.prec
        for it in range(P):
            for iy in range(P - it):
                idx = it * P + iy
                if any(c[idx] for c in self._c):
                    yield (it, iy), self.coeff(it, iy)

    def is_zero(self) -> bool:
        return all(not any(c) for c in self._c)

    def order(self):
        """Total-degree order; math.inf when zero to precision."""
        best = INF
        for (it, iy), _ in self.terms():
            best = min(best, it + iy)
        return best

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivarSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.prec == other.prec
            and self.den == other.den
            and self._c == other._c
        )

    def __hash__(self):
        return hash((self.field, self.prec, self.den, self._c))

    def __repr__(self) -> str:
        parts = [f"({s})*t^{it}*Y^{iy}" for (it, iy), s in self.terms()]
        if len(parts) > 8:
            parts = parts[:8] + ["..."]
        return f"<{' + '.join(parts) if parts else '0'} | deg<{self.prec}>"

    # -- arithmetic --------------------------------------------------------

    def _common(self, other: "BivarSeries") -> int:
        if self.field != other.field:
            raise FieldError("series over different fields")
        return min(self.prec, other.prec)

    def truncate(self, prec: int) -> "BivarSeries":
        if prec >= self.prec:
            return self
        comps = []
        for c in self._c:
            comps.append(
                [c[it * self.prec + iy] if it + iy < prec else 0
                 for it in range(prec) for iy in range(prec)]
            )
        return BivarSeries(self.field, prec, self.den, comps)

    def __add__(self, other: "BivarSeries") -> "BivarSeries":
        prec = self._common(other)
        a, b = self.truncate(prec), other.truncate(prec)
        g = gcd(a.den, b.den)
        den = a.den // g * b.den
        f1, f2 = b.den // g, a.den // g
        comps = [[f1 * x + f2 * y for x, y in zip(ca, cb)] for ca, cb in zip(a._c, b._c)]
        return BivarSeries(self.field, prec, den, comps)

    def __sub__(self, other: "BivarSeries") -> "BivarSeries":
        return self + (-other)

    def __neg__(self) -> "BivarSeries":
        return BivarSeries(self.field, self.prec, self.den, [[-x for x in c] for c in self._c])

    def _nonzero(self, comp_idx: int):
        P = self.prec
        comp = self._c[comp_idx]
        return [
            (it, iy, comp[it * P + iy])
            for it in range(P)
            for iy in range(P - it)
            if comp[it * P + iy]
        ]

    def __mul__(self, other: "BivarSeries") -> "BivarSeries":
        prec = self._common(other)
        a, b = self.truncate(prec), other.truncate(prec)
        den = a.den * b.den

        def conv(ca_idx, cb_idx, sign, target):
            for it1, iy1, v1 in a._nonzero(ca_idx):
                for it2, iy2, v2 in b._nonzero(cb_idx):
                    it, iy = it1 + it2, iy1 + iy2
                    if it + iy < prec:
                        target[it * prec + iy] += sign * v1 * v2

        size = prec * prec
        if self.field.dim == 1:
            out = [0] * size
            conv(0, 0, 1, out)
            comps = [out]
        else:
            re = [0] * size
            im = [0] * size
            conv(0, 0, 1, re)
            conv(1, 1, -1, re)
            conv(0, 1, 1, im)
            conv(1, 0, 1, im)
            comps = [re, im]
        return BivarSeries(self.field, prec, den, comps)

    def scale(self, s: Scalar) -> "BivarSeries":
        nums, sden = _coords_to_ints(_as_scalar(self.field, s).coords)
        den = self.den * sden
        if self.field.dim == 1:
            comps = [[nums[0] * x for x in self._c[0]]]
        else:
            a, b = nums
            re, im = self._c
            comps = [
                [a * x - b * y for x, y in zip(re, im)],
                [a * y + b * x for x, y in zip(re, im)],
            ]
        return BivarSeries(self.field, self.prec, den, comps)

    # -- structure helpers used by the division loop ------------------------

    def y_row(self) -> "BivarSeries":
        """The t-free part (a series in Y alone)."""
        P = self.prec
        comps = []
        for c in self._c:
            out = [0] * (P * P)
            out[:P] = c[:P]
            comps.append(out)
        return BivarSeries(self.field, P, self.den, comps)

    def shift_down_t(self) -> "BivarSeries":
        """(self - y_row)/t as a representative; window size kept."""
        P = self.prec
        comps = []
        for c in self._c:
            out = [0] * (P * P)
            out[: P * (P - 1)] = c[P:]
            comps.append(out)
        return BivarSeries(self.field, P, self.den, comps)

    def is_y_only(self) -> bool:
        P = self.prec
        return all(not any(c[P:]) for c in self._c)


def _bivar_invert_unit(w: BivarSeries) -> BivarSeries:
    c0 = w.coeff(0, 0)
    if c0.is_zero():
        raise NonUnitError("bivariate inverse needs an invertible constant term")
    x = BivarSeries.from_terms(w.field, {(0, 0): c0.inverse()}, w.prec)
    two = BivarSeries.from_terms(w.field, {(0, 0): 2}, w.prec)
    for _ in range(max(1, math.ceil(math.log2(w.prec)))):
        x = x * (two - w * x)
    return x


def weierstrass_div(g: BivarSeries, f: BivarSeries) -> tuple[BivarSeries, BivarSeries]:
    """Divide g by a t-regular degree-1 element: g = q*f + r with r in K[[Y]].

    f must split as rho(Y) + t*w(t, Y) with rho(0) = 0 and w a unit.  The
    returned pair satisfies the identity exactly within the truncation
    window; q is canonical one total degree lower than the window, so it is
    returned with precision reduced by one.
    """
    prec = min(g.prec, f.prec)
    g = g.truncate(prec)
    f = f.truncate(prec)
    if prec < 2:
        raise ValueError("window too small for a division")
    if not f.coeff(0, 0).is_zero():
        raise RegularityError("divisor has a unit constant term: not t-regular of degree 1")
    rho = f.y_row()
    w = f.shift_down_t()
    if w.coeff(0, 0).is_zero():
        raise RegularityError("divisor is not t-regular of degree 1 (t-coefficient not a unit)")
    winv = _bivar_invert_unit(w)

    q = BivarSeries.zero(f.field, prec)
    r = BivarSeries.zero(f.field, prec)
    cur = g
    # weighted order (t weight 1, Y weight 2) grows every round, so 2*prec+4
    # rounds are already past any surviving monomial
    for _ in range(2 * prec + 4):
        if cur.is_zero():
            break
        r = r + cur.y_row()
        g1 = cur.shift_down_t()
        if g1.is_zero():
            cur = BivarSeries.zero(f.field, prec)
            break
        m = winv * g1
        q = q + m
        cur = -(rho * m)
    else:
        raise ArithmeticError("Weierstrass division did not terminate (internal bug)")
    return q.truncate(prec - 1), r


def prime_valuation(g: BivarSeries, f: BivarSeries) -> int:
    """Largest e with f^e dividing g, by repeated Weierstrass division.

    Each division step costs one total degree of certainty, so the usable
    range of e shrinks with the window; g vanishing to precision is an error
    (its order is indistinguishable from the cut).
    """
    if g.is_zero():
        raise ValueError("element is indistinguishable from 0 at this precision")
    e = 0
    cur = g
    while True:
        if cur.prec < 2:
            raise ValueError("precision exhausted while peeling prime factors")
        q, r = weierstrass_div(cur, f)
        if not r.is_zero():
            return e
        e += 1
        if q.is_zero():
            raise ValueError("element is indistinguishable from 0 at this precision")
        cur = q
