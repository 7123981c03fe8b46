"""Canonical forms for the analytic subrings of K((X,Y)) attached to a
family of distinct centers.

Fix distinct scalars c_0, ..., c_{r-1} and put z_i = Y/(X - c_i Y).  Working
in the chart j means writing everything over the uniformizer t = X - c_j Y.
An element is stored as

    f = f0(t) + sum_{k, n >= 1} f_{k,n}(t) * z_k^n

with all coefficient series truncated at the same t-precision.  This
presentation is unique, so equality of elements is equality of stored data
(after aligning charts), and the order valuation of f is the minimum of the
t-orders of the stored series.

The multiplication kernel rests on the partial-fraction identity

    z_i * z_j = z_i/(c_i - c_j) + z_j/(c_j - c_i)        (i != j)

applied recursively, which keeps products of canonical forms canonical.
Chart changes use t_j = (1 + (c_{j'} - c_j) z_{j'}) * t_{j'} followed by the
same reduction.

Everything here is immutable and pure; configurations carry memo tables for
the rewrite coefficients but those are write-once caches.
"""

from __future__ import annotations

import math
from math import comb, gcd
from typing import Iterable, Optional, Sequence

from .scalars import FieldDescriptor, FieldError, Scalar
from .series import INF, NonUnitError, RegularityError, TruncSeries, poly_simple_root

__all__ = [
    "ChartError",
    "SupportError",
    "UnitNotRecognized",
    "PrimePointError",
    "Configuration",
    "default_configuration",
    "AnalyticElement",
    "LocalizedElement",
    "PrimePoint",
    "z_generator",
    "embed_xy",
    "t_element",
    "chart_ratio_unit",
    "split",
    "membership",
    "unit_invert",
    "weierstrass_prepare_linear",
    "prime_point_valuation",
    "random_element",
]


class ChartError(ValueError):
    """Operands disagree about chart or configuration."""


class SupportError(ValueError):
    """Element supported outside the set an operation requires."""


class UnitNotRecognized(ArithmeticError):
    """Input is outside the recognized unit classes.

    This is *not* a certificate of non-invertibility; it only says the
    recognizer does not know the element's inverse.
    """


class PrimePointError(ValueError):
    """Prime-point construction rejected (non-unit substitution denominator)."""


class Configuration:
    """The ambient data: coefficient field, centers, working precision."""

    def __init__(self, field: FieldDescriptor, centers: Sequence, precision: int = 16):
        if precision < 1:
            raise ValueError("precision must be positive")
        self.field = field
        self.centers = tuple(
            c if isinstance(c, Scalar) else Scalar.of(field, c) for c in centers
        )
        for c in self.centers:
            if c.field != field:
                raise FieldError("center over a different field")
        for a in range(len(self.centers)):
            for b in range(a + 1, len(self.centers)):
                if self.centers[a] == self.centers[b]:
                    raise ValueError("centers must be distinct")
        self.precision = precision
        self._rw_cache: dict = {}
        self._rwi_cache: dict = {}

    @property
    def indices(self) -> range:
        return range(len(self.centers))

    def center(self, i: int) -> Scalar:
        return self.centers[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.field == other.field
            and self.centers == other.centers
            and self.precision == other.precision
        )

    def __hash__(self):
        return hash((self.field, self.centers, self.precision))

    def __repr__(self) -> str:
        cs = ", ".join(str(c) for c in self.centers)
        return f"Configuration({self.field.describe()}, centers=[{cs}], N={self.precision})"

    def to_dict(self) -> dict:
        return {
            "field": {"kind": self.field.kind, "m": self.field.m},
            "centers": [str(c) for c in self.centers],
            "precision": self.precision,
        }

    # -- series factories ---------------------------------------------------

    def zero_series(self, prec: Optional[int] = None) -> TruncSeries:
        return TruncSeries.zero(self.field, prec or self.precision)

    def one_series(self, prec: Optional[int] = None) -> TruncSeries:
        return TruncSeries.one(self.field, prec or self.precision)

    def series(self, values: Iterable, prec: Optional[int] = None) -> TruncSeries:
        return TruncSeries.from_scalars(self.field, values, prec or self.precision)

    def t_series(self, e: int = 1, prec: Optional[int] = None, coeff=1) -> TruncSeries:
        return TruncSeries.t_power(self.field, e, prec or self.precision, coeff)

    def scalar(self, v) -> Scalar:
        return v if isinstance(v, Scalar) else Scalar.of(self.field, v)

    # -- the cross-term rewrite ----------------------------------------------

    def rewrite(self, i: int, a: int, j: int, b: int) -> dict:
        """Reduction of z_i^a * z_j^b (i != j) to pure powers.

        Returns a map (index, exponent) -> Scalar.  Cached per configuration.
        """
        if i == j:
            raise ValueError("rewrite is only for distinct indices")
        key = (i, a, j, b)
        hit = self._rw_cache.get(key)
        if hit is not None:
            return hit
        if a == 0:
            out = {(j, b): Scalar.one(self.field)} if b else {}
        elif b == 0:
            out = {(i, a): Scalar.one(self.field)}
        else:
            alpha = (self.centers[i] - self.centers[j]).inverse()
            beta = -alpha
            out: dict = {}
            for (k, n), c in self.rewrite(i, a, j, b - 1).items():
                out[(k, n)] = out.get((k, n), Scalar.zero(self.field)) + alpha * c
            for (k, n), c in self.rewrite(i, a - 1, j, b).items():
                out[(k, n)] = out.get((k, n), Scalar.zero(self.field)) + beta * c
            out = {kn: c for kn, c in out.items() if not c.is_zero()}
        self._rw_cache[key] = out
        return out

    def rewrite_ints(self, i: int, a: int, j: int, b: int) -> tuple:
        """rewrite() with coefficients pre-converted to (nums, den) integers."""
        key = (i, a, j, b)
        hit = self._rwi_cache.get(key)
        if hit is None:
            hit = tuple(
                (kn, *_scalar_ints(c)) for kn, c in self.rewrite(i, a, j, b).items()
            )
            self._rwi_cache[key] = hit
        return hit


def default_configuration(precision: int = 16) -> Configuration:
    from .scalars import QQ

    return Configuration(QQ, [0, 1, 2], precision)


# ---------------------------------------------------------------------------
# series accumulator (shared by the mul/rebase kernels)
# ---------------------------------------------------------------------------


class _SeriesAcc:
    """Mutable common-denominator accumulator for one coefficient series."""

    __slots__ = ("field", "prec", "den", "comps")

    def __init__(self, field: FieldDescriptor, prec: int):
        self.field = field
        self.prec = prec
        self.den = 1
        self.comps = [[0] * prec for _ in range(field.dim)]

    def _merge_den(self, tden: int) -> int:
        if tden == self.den:
            return 1
        g = gcd(self.den, tden)
        new_den = self.den // g * tden
        f_self = new_den // self.den
        if f_self != 1:
            for comp in self.comps:
                for n in range(self.prec):
                    if comp[n]:
                        comp[n] *= f_self
        self.den = new_den
        return new_den // tden

    def add(self, ts: TruncSeries, num: int = 1, den: int = 1) -> None:
        f = self._merge_den(ts.den * den) * num
        for comp, src in zip(self.comps, ts._c):
            for n in range(min(self.prec, ts.prec)):
                x = src[n]
                if x:
                    comp[n] += f * x

    def add_scaled(self, ts: TruncSeries, s: Scalar) -> None:
        nums, sden = _scalar_ints(s)
        self.add_ints(ts, nums, sden)

    def add_ints(self, ts: TruncSeries, nums, sden: int) -> None:
        f = self._merge_den(ts.den * sden)
        lim = min(self.prec, ts.prec)
        if self.field.dim == 1:
            a = nums[0] * f
            comp, src = self.comps[0], ts._c[0]
            for n in range(lim):
                x = src[n]
                if x:
                    comp[n] += a * x
        else:
            a, b = nums[0] * f, nums[1] * f
            re_t, im_t = self.comps
            re_s, im_s = ts._c
            for n in range(lim):
                x, y = re_s[n], im_s[n]
                if x or y:
                    re_t[n] += a * x - b * y
                    im_t[n] += a * y + b * x

    def add_monomial_ints(self, ts: TruncSeries, m: int, nums, den: int) -> None:
        """self += (nums/den) * (coefficient of t^m in ts) * t^m."""
        if m >= min(self.prec, ts.prec):
            return
        f = self._merge_den(ts.den * den)
        if self.field.dim == 1:
            x = ts._c[0][m]
            if x:
                self.comps[0][m] += nums[0] * f * x
        else:
            x, y = ts._c[0][m], ts._c[1][m]
            if x or y:
                a, b = nums[0] * f, nums[1] * f
                self.comps[0][m] += a * x - b * y
                self.comps[1][m] += a * y + b * x

    def is_zero(self) -> bool:
        return all(not any(c) for c in self.comps)

    def result(self) -> TruncSeries:
        return TruncSeries(self.field, self.prec, self.den, self.comps)


def _scalar_ints(s: Scalar) -> tuple[list[int], int]:
    den = 1
    for c in s.coords:
        den = den * c.denominator // gcd(den, c.denominator)
    return [int(c * den) for c in s.coords], den


def _ints_mul(n1, d1: int, n2, d2: int, dim: int) -> tuple[list[int], int]:
    if dim == 1:
        return [n1[0] * n2[0]], d1 * d2
    a, b = n1
    c, d = n2
    return [a * c - b * d, a * d + b * c], d1 * d2


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


class AnalyticElement:
    """A canonical form f0 + sum f_{k,n} z_k^n over a fixed chart."""

    __slots__ = ("cfg", "chart", "f0", "zc")

    def __init__(self, cfg: Configuration, chart: int, f0: TruncSeries, zc: dict):
        if chart not in cfg.indices:
            raise ChartError(f"chart {chart} outside the configured index set")
        prec = f0.prec
        for s in zc.values():
            prec = min(prec, s.prec)
        clean = {}
        for (k, n), s in zc.items():
            if k not in cfg.indices or n < 1:
                raise ValueError(f"bad canonical slot ({k}, {n})")
            s = s.truncate(prec)
            if not s.is_zero():
                clean[(k, n)] = s
        self.cfg = cfg
        self.chart = chart
        self.f0 = f0.truncate(prec)
        self.zc = clean

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(cfg: Configuration, chart: int = 0, prec: Optional[int] = None) -> "AnalyticElement":
        return AnalyticElement(cfg, chart, cfg.zero_series(prec), {})

    @staticmethod
    def one(cfg: Configuration, chart: int = 0, prec: Optional[int] = None) -> "AnalyticElement":
        return AnalyticElement(cfg, chart, cfg.one_series(prec), {})

    @staticmethod
    def constant(cfg: Configuration, value, chart: int = 0, prec: Optional[int] = None):
        return AnalyticElement(
            cfg, chart, TruncSeries.constant(cfg.field, value, prec or cfg.precision), {}
        )

    @staticmethod
    def from_terms(cfg: Configuration, chart: int, f0, zc: dict, prec: Optional[int] = None):
        """Build from a t-series (or scalar) f0 and {(k, n): series-or-scalar}."""
        P = prec or cfg.precision
        if not isinstance(f0, TruncSeries):
            f0 = TruncSeries.constant(cfg.field, f0, P)
        zs = {}
        for kn, v in zc.items():
            zs[kn] = v if isinstance(v, TruncSeries) else TruncSeries.constant(cfg.field, v, P)
        return AnalyticElement(cfg, chart, f0, zs)

    # -- views ---------------------------------------------------------------

    @property
    def precision(self) -> int:
        return self.f0.prec

    @property
    def zcoeffs(self) -> dict:
        """The z-coefficient table keyed by (index, exponent)."""
        return dict(self.zc)

    def support(self) -> frozenset:
        return frozenset(k for (k, _n) in self.zc)

    def terms(self):
        for (k, n) in sorted(self.zc):
            yield k, n, self.zc[(k, n)]

    def is_zero(self) -> bool:
        return self.f0.is_zero() and not self.zc

    def is_one(self) -> bool:
        return not self.zc and self.f0 == self.cfg.one_series(self.precision)

    def valuation(self):
        """Order valuation: min t-order over stored series (inf when 0 mod t^N)."""
        v = self.f0.vt()
        for s in self.zc.values():
            v = min(v, s.vt())
            if v == 0:
                return 0
        return v

    def zdegree(self) -> int:
        return max((n for (_k, n) in self.zc), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AnalyticElement):
            return NotImplemented
        return (
            self.cfg == other.cfg
            and self.chart == other.chart
            and self.f0 == other.f0
            and self.zc == other.zc
        )

    def __hash__(self):
        return hash((self.chart, self.f0, tuple(sorted(self.zc.items()))))

    def equals(self, other: "AnalyticElement") -> bool:
        """Chart-insensitive equality at the common precision."""
        if self.cfg != other.cfg:
            return False
        g = other.rebase(self.chart)
        prec = min(self.precision, g.precision)
        return self.truncate(prec) == g.truncate(prec)

    def truncate(self, prec: int) -> "AnalyticElement":
        if prec >= self.precision:
            return self
        return AnalyticElement(
            self.cfg, self.chart, self.f0.truncate(prec),
            {kn: s.truncate(prec) for kn, s in self.zc.items()},
        )

    def __repr__(self) -> str:
        bits = []
        if not self.f0.is_zero():
            bits.append(repr(self.f0))
        for k, n, s in self.terms():
            bits.append(f"{s!r}*z{k}^{n}" if n > 1 else f"{s!r}*z{k}")
        body = " + ".join(bits) if bits else "0"
        return f"AE[chart {self.chart}]({body})"

    # -- ring operations ------------------------------------------------------

    def _aligned(self, other: "AnalyticElement") -> "AnalyticElement":
        if self.cfg != other.cfg:
            raise ChartError("elements from different configurations")
        return other.rebase(self.chart)

    def __add__(self, other: "AnalyticElement") -> "AnalyticElement":
        other = self._aligned(other)
        zc = dict(self.zc)
        for kn, s in other.zc.items():
            zc[kn] = zc[kn] + s if kn in zc else s
        return AnalyticElement(self.cfg, self.chart, self.f0 + other.f0, zc)

    def __sub__(self, other: "AnalyticElement") -> "AnalyticElement":
        return self + (-other)

    def __neg__(self) -> "AnalyticElement":
        return AnalyticElement(
            self.cfg, self.chart, -self.f0, {kn: -s for kn, s in self.zc.items()}
        )

    def scale(self, s) -> "AnalyticElement":
        s = self.cfg.scalar(s)
        return AnalyticElement(
            self.cfg, self.chart, self.f0.scale(s), {kn: c.scale(s) for kn, c in self.zc.items()}
        )

    def scale_series(self, s: TruncSeries) -> "AnalyticElement":
        return AnalyticElement(
            self.cfg, self.chart, self.f0 * s, {kn: c * s for kn, c in self.zc.items()}
        )

    def __mul__(self, other: "AnalyticElement") -> "AnalyticElement":
        other = self._aligned(other)
        if self.is_zero() or other.is_zero():
            return AnalyticElement.zero(self.cfg, self.chart, min(self.precision, other.precision))
        if self.is_one():
            return other.truncate(self.precision)
        if other.is_one():
            return self.truncate(other.precision)
        return ae_dot([(self, other)])

    def __pow__(self, e: int) -> "AnalyticElement":
        if e < 0:
            raise ValueError("use unit_invert for negative powers")
        out = AnalyticElement.one(self.cfg, self.chart, self.precision)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def _term_list(self):
        terms = [(None, 0, self.f0)] if not self.f0.is_zero() else []
        terms += [(k, n, s) for (k, n), s in self.zc.items()]
        return terms

    # -- chart change ----------------------------------------------------------

    def rebase(self, to_chart: int) -> "AnalyticElement":
        """The same ring element written over t' = X - c_{j'} Y.

        Uses t = (1 + (c_{j'} - c_j) z_{j'}) t' expanded binomially, with
        cross terms reduced by the rewrite rule.
        """
        if to_chart == self.chart:
            return self
        cfg = self.cfg
        if to_chart not in cfg.indices:
            raise ChartError(f"chart {to_chart} outside the configured index set")
        dim = cfg.field.dim
        delta = cfg.centers[to_chart] - cfg.centers[self.chart]
        prec = self.precision
        acc0 = _SeriesAcc(cfg.field, prec)
        acc: dict = {}

        def slot(k: int, n: int) -> _SeriesAcc:
            a = acc.get((k, n))
            if a is None:
                a = acc[(k, n)] = _SeriesAcc(cfg.field, prec)
            return a

        # integer forms of delta^l, shared across all source terms
        d_ints = _scalar_ints(delta)
        dpow = [([1] + [0] * (dim - 1), 1)]
        for _ in range(prec - 1):
            pn, pd = dpow[-1]
            dpow.append(_ints_mul(pn, pd, d_ints[0], d_ints[1], dim))

        # spread of delta^l * z_{j'}^l * z_k^n into canonical slots, cached per (l, k, n)
        spread_cache: dict = {}

        def spread(l: int, k: int, n: int):
            key = (l, k, n)
            hit = spread_cache.get(key)
            if hit is None:
                dn, dd = dpow[l]
                items = []
                for (kk, nn), rc in cfg.rewrite(to_chart, l, k, n).items():
                    rn, rd = _scalar_ints(rc)
                    items.append(((kk, nn), *_ints_mul(dn, dd, rn, rd, dim)))
                hit = spread_cache[key] = items
            return hit

        one_ints = ([1] + [0] * (dim - 1), 1)
        sources = [(None, 0, self.f0)] if not self.f0.is_zero() else []
        sources += [(k, n, s) for (k, n), s in self.zc.items()]
        for k, n, s in sources:
            alive = [m for m in range(min(prec, s.prec)) if any(c[m] for c in s._c)]
            for m in alive:
                if k is None:
                    acc0.add_monomial_ints(s, m, *one_ints)
                else:
                    slot(k, n).add_monomial_ints(s, m, *one_ints)
                for l in range(1, m + 1):
                    cmb = comb(m, l)
                    if k is None or k == to_chart:
                        dn, dd = dpow[l]
                        tgt_n = l + (n if k == to_chart else 0)
                        slot(to_chart, tgt_n).add_monomial_ints(
                            s, m, [cmb * x for x in dn], dd
                        )
                    else:
                        for kn2, sn, sd in spread(l, k, n):
                            slot(*kn2).add_monomial_ints(
                                s, m, [cmb * x for x in sn], sd
                            )
        zc = {kn: a.result() for kn, a in acc.items() if not a.is_zero()}
        return AnalyticElement(cfg, to_chart, acc0.result(), zc)

    # -- t-power shifts ----------------------------------------------------------

    def shift_t(self, e: int) -> "AnalyticElement":
        """Multiply by t^e.  Negative e needs valuation >= -e and costs precision."""
        if e == 0:
            return self
        if e > 0:
            return AnalyticElement(
                self.cfg, self.chart, self.f0.shift_up(e),
                {kn: s.shift_up(e) for kn, s in self.zc.items()},
            )
        d = -e
        if self.valuation() < d:
            raise NonUnitError(f"element not divisible by t^{d}")
        return AnalyticElement(
            self.cfg, self.chart, self.f0.shift_down(d),
            {kn: s.shift_down(d) for kn, s in self.zc.items()},
        )

    # -- the t^0 layer -------------------------------------------------------------

    def t0_content(self) -> tuple[Scalar, dict]:
        """Constant term and z-polynomial of the reduction mod t."""
        const = self.f0.coeff(0)
        zpoly = {}
        for (k, n), s in self.zc.items():
            c = s.coeff(0)
            if not c.is_zero():
                zpoly[(k, n)] = c
        return const, zpoly


# ---------------------------------------------------------------------------
# basic element factories
# ---------------------------------------------------------------------------


def ae_dot(pairs) -> AnalyticElement:
    """Sum of products f*g over chart-aligned pairs in one accumulation pass.

    The workhorse behind element and matrix products: every partial product
    lands directly in shared per-slot accumulators, so nothing is
    re-canonicalized between summands.
    """
    pairs = [(f, g if g.chart == f.chart else g.rebase(f.chart)) for f, g in pairs]
    f0, g0 = pairs[0]
    cfg = f0.cfg
    chart = f0.chart
    prec = min(min(f.precision, g.precision) for f, g in pairs)
    acc0 = _SeriesAcc(cfg.field, prec)
    acc: dict = {}

    def slot(k: int, n: int) -> _SeriesAcc:
        a = acc.get((k, n))
        if a is None:
            a = acc[(k, n)] = _SeriesAcc(cfg.field, prec)
        return a

    for f, g in pairs:
        terms_g = [(k2, n2, s2, s2.vt()) for k2, n2, s2 in g._term_list()]
        for k1, n1, s1 in f._term_list():
            v1 = s1.vt()
            for k2, n2, s2, v2 in terms_g:
                if v1 + v2 >= prec:
                    continue
                prod = s1 * s2
                if prod.is_zero():
                    continue
                if k1 is None and k2 is None:
                    acc0.add(prod)
                elif k1 is None:
                    slot(k2, n2).add(prod)
                elif k2 is None or k1 == k2:
                    slot(k1, n1 + (n2 if k2 is not None else 0)).add(prod)
                else:
                    for kn, nums, den in cfg.rewrite_ints(k1, n1, k2, n2):
                        slot(*kn).add_ints(prod, nums, den)
    zc = {kn: a.result() for kn, a in acc.items() if not a.is_zero()}
    return AnalyticElement(cfg, chart, acc0.result(), zc)


def z_generator(cfg: Configuration, k: int, chart: int = 0, prec: Optional[int] = None) -> AnalyticElement:
    """The generator z_k as a canonical form (chart-independent data)."""
    if k not in cfg.indices:
        raise ValueError(f"no center with index {k}")
    P = prec or cfg.precision
    return AnalyticElement(cfg, chart, cfg.zero_series(P), {(k, 1): cfg.one_series(P)})


def t_element(cfg: Configuration, chart: int, prec: Optional[int] = None) -> AnalyticElement:
    """The chart uniformizer t = X - c_j Y as an element of the chart."""
    return AnalyticElement(cfg, chart, cfg.t_series(1, prec), {})


def embed_xy(cfg: Configuration, poly: dict, chart: int, prec: Optional[int] = None) -> AnalyticElement:
    """Canonical form of a polynomial in X, Y.

    poly maps (a, b) -> coefficient for the monomial X^a Y^b.  Uses
    Y = z_j t and X = (1 + c_j z_j) t.
    """
    P = prec or cfg.precision
    cj = cfg.centers[chart]
    acc0 = _SeriesAcc(cfg.field, P)
    acc: dict = {}
    cj_pow = [Scalar.one(cfg.field)]
    for (a, b), coef in poly.items():
        if a < 0 or b < 0:
            raise ValueError("monomial exponents must be non-negative")
        coef = cfg.scalar(coef)
        if coef.is_zero() or a + b >= P:
            continue
        while len(cj_pow) <= a:
            cj_pow.append(cj_pow[-1] * cj)
        tpow = TruncSeries.t_power(cfg.field, a + b, P)
        for l in range(a + 1):
            c = coef * Scalar.of(cfg.field, comb(a, l)) * cj_pow[l]
            if c.is_zero():
                continue
            deg = l + b
            if deg == 0:
                acc0.add_scaled(tpow, c)
            else:
                slot = acc.get((chart, deg))
                if slot is None:
                    slot = acc[(chart, deg)] = _SeriesAcc(cfg.field, P)
                slot.add_scaled(tpow, c)
    zc = {kn: a.result() for kn, a in acc.items() if not a.is_zero()}
    return AnalyticElement(cfg, chart, acc0.result(), zc)


def chart_ratio_unit(cfg: Configuration, j2: int, j: int, prec: Optional[int] = None) -> AnalyticElement:
    """The unit 1 + (c_{j2} - c_j) z_{j2}; its inverse is 1 + (c_j - c_{j2}) z_j."""
    P = prec or cfg.precision
    delta = cfg.centers[j2] - cfg.centers[j]
    one = cfg.one_series(P)
    if delta.is_zero():
        return AnalyticElement(cfg, j2, one, {})
    return AnalyticElement(
        cfg, j2, one, {(j2, 1): TruncSeries.constant(cfg.field, delta, P)}
    )


# ---------------------------------------------------------------------------
# localized elements (t-shifted)
# ---------------------------------------------------------------------------


class LocalizedElement:
    """t^e * body with e possibly negative (an element after inverting t)."""

    __slots__ = ("body", "tshift")

    def __init__(self, body: AnalyticElement, tshift: int = 0):
        self.body = body
        self.tshift = tshift

    @staticmethod
    def of(x) -> "LocalizedElement":
        return x if isinstance(x, LocalizedElement) else LocalizedElement(x, 0)

    @property
    def cfg(self) -> Configuration:
        return self.body.cfg

    @property
    def chart(self) -> int:
        return self.body.chart

    @property
    def precision(self) -> int:
        return self.body.precision

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def valuation(self):
        v = self.body.valuation()
        return v if v == INF else v + self.tshift

    def support(self) -> frozenset:
        return self.body.support()

    def rebase(self, chart: int) -> "LocalizedElement":
        return LocalizedElement(self.body.rebase(chart), self.tshift)

    def __neg__(self) -> "LocalizedElement":
        return LocalizedElement(-self.body, self.tshift)

    def __mul__(self, other) -> "LocalizedElement":
        other = LocalizedElement.of(other)
        return LocalizedElement(self.body * other.body, self.tshift + other.tshift)

    def __add__(self, other) -> "LocalizedElement":
        other = LocalizedElement.of(other)
        e = min(self.tshift, other.tshift)
        b1 = self.body.shift_t(self.tshift - e)
        b2 = other.body.shift_t(other.tshift - e)
        return LocalizedElement(b1 + b2, e)

    def __sub__(self, other) -> "LocalizedElement":
        return self + (-LocalizedElement.of(other))

    def scale(self, s) -> "LocalizedElement":
        return LocalizedElement(self.body.scale(s), self.tshift)

    def as_element(self) -> AnalyticElement:
        """Forget the localization; only legal for non-negative shifts."""
        if self.tshift < 0:
            raise ValueError("negative t-shift: not an element of the unlocalized ring")
        return self.body.shift_t(self.tshift)

    def equals(self, other) -> bool:
        diff = self - LocalizedElement.of(other)
        return diff.is_zero()

    def __repr__(self) -> str:
        return f"t^{self.tshift} * {self.body!r}"


# ---------------------------------------------------------------------------
# support splitting and membership
# ---------------------------------------------------------------------------


def split(f: AnalyticElement, J: Iterable[int], Jp: Iterable[int]) -> tuple[AnalyticElement, AnalyticElement]:
    """Write f = f1 + f2 with f1 supported in J and f2 in J'.

    f must be supported in J ∪ J' (checked as ring membership).  The z-free
    part goes with f1, so the output is deterministic.  Both parts keep
    valuation >= valuation(f); f2 comes back over a J'-chart.
    """
    cfg = f.cfg
    J = frozenset(J)
    Jp = frozenset(Jp)
    if not membership(f, J | Jp):
        raise SupportError("element not supported in the union of the two sides")
    if not J:
        g = f.rebase(min(Jp)) if Jp else f
        return AnalyticElement.zero(cfg, g.chart, f.precision), g
    if not Jp:
        return f.rebase(f.chart if f.chart in J else min(J)), AnalyticElement.zero(
            cfg, f.chart, f.precision
        )
    g = f.rebase(f.chart if f.chart in J else min(J))
    zc1 = {}
    zc2 = {}
    for (k, n), s in g.zc.items():
        (zc1 if k in J else zc2)[(k, n)] = s
    f1 = AnalyticElement(cfg, g.chart, g.f0, zc1)
    f2 = AnalyticElement(cfg, g.chart, cfg.zero_series(g.precision), zc2)
    j2 = g.chart if g.chart in Jp else min(Jp)
    return f1, f2.rebase(j2)


def membership(f: AnalyticElement, J: Iterable[int]) -> bool:
    """Does f lie in the subring generated by {z_k : k in J} (mod t^N)?

    For nonempty J: rebase into a J-chart and inspect the support.  For
    J = ∅ (the plain power-series ring in X, Y) the criterion is that only
    the chart generator appears and the z-degree of each t^n layer is at
    most n, since z_j^m t^n = Y^m (X - c_j Y)^{n-m} exactly when m <= n.
    """
    J = frozenset(J)
    if J:
        g = f.rebase(f.chart if f.chart in J else min(J))
        return g.support() <= J
    g = f
    if not g.support() <= {g.chart}:
        return False
    for (_k, n), s in g.zc.items():
        if s.vt() < n:
            return False
    return True


# ---------------------------------------------------------------------------
# unit recognition and inversion
# ---------------------------------------------------------------------------


def _poly_eval_scalar(p: list, x: Scalar) -> Scalar:
    acc = Scalar.zero(x.field)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_mul(p: list, q: list, field: FieldDescriptor) -> list:
    out = [Scalar.zero(field)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _poly_divide_root(p: list, c: Scalar) -> Optional[list]:
    """Synthetic division of p by (s - c); None when c is not a root."""
    field = c.field
    out = [Scalar.zero(field)] * (len(p) - 1)
    carry = Scalar.zero(field)
    for i in range(len(p) - 1, 0, -1):
        carry = p[i] + carry * c if i < len(p) - 1 else p[i]
        out[i - 1] = carry
    rem = p[0] + carry * c
    return None if not rem.is_zero() else out


def _unit_factorization(f: AnalyticElement):
    """Recognize f mod t as c * prod (s - c_l)/(s - c_k) over the centers.

    Returns (c, [(k, l), ...]) with each pair standing for a factor
    1 + (c_k - c_l) z_k whose inverse is 1 + (c_l - c_k) z_l.  Raises
    UnitNotRecognized otherwise.
    """
    cfg = f.cfg
    field = cfg.field
    const, zpoly = f.t0_content()
    if const.is_zero():
        raise UnitNotRecognized(
            "reduction mod t has no constant part; not in the recognized unit classes"
        )
    if not zpoly:
        return const, []
    # clear denominators: multiply by prod_k (s - c_k)^{d_k}
    degs: dict = {}
    for (k, n) in zpoly:
        degs[k] = max(degs.get(k, 0), n)
    denom_poly = [Scalar.one(field)]
    for k, d in sorted(degs.items()):
        lin = [-cfg.centers[k], Scalar.one(field)]
        for _ in range(d):
            denom_poly = _poly_mul(denom_poly, lin, field)
    numer = [const * c for c in denom_poly]
    for (k, n), c in zpoly.items():
        partial = [Scalar.one(field)]
        for kk, d in sorted(degs.items()):
            e = d - n if kk == k else d
            lin = [-cfg.centers[kk], Scalar.one(field)]
            for _ in range(e):
                partial = _poly_mul(partial, lin, field)
        for i, a in enumerate(partial):
            numer[i] = numer[i] + c * a
    while len(numer) > 1 and numer[-1].is_zero():
        numer.pop()
    if len(numer) - 1 != len(denom_poly) - 1:
        raise UnitNotRecognized("pole/zero pattern off balance at t^0")
    # strip the constant: numer should factor over the centers with lead = const
    roots = []
    poly = [c / const for c in numer]
    for idx in cfg.indices:
        while len(poly) > 1:
            q = _poly_divide_root(poly, cfg.centers[idx])
            if q is None:
                break
            poly = q
            roots.append(idx)
    if len(poly) != 1 or not poly[0].is_one():
        raise UnitNotRecognized(
            "t^0 part has a zero or pole away from the configured centers"
        )
    denom_idx = []
    for k, d in sorted(degs.items()):
        denom_idx += [k] * d
    # cancel matched zero/pole pairs at the same center
    for idx in list(roots):
        if idx in denom_idx and idx in roots:
            roots.remove(idx)
            denom_idx.remove(idx)
    if len(roots) != len(denom_idx):
        raise UnitNotRecognized("unbalanced pole/zero multiplicities at t^0")
    return const, list(zip(denom_idx, roots))


def _invert_one_plus_small(g: AnalyticElement) -> AnalyticElement:
    """Inverse of g = 1 + h with valuation(h) >= 1, by Newton doubling."""
    cfg = g.cfg
    prec = g.precision
    x = AnalyticElement.one(cfg, g.chart, prec)
    two = AnalyticElement.constant(cfg, 2, g.chart, prec)
    for _ in range(max(1, math.ceil(math.log2(prec)))):
        x = x * (two - g * x)
    return x


def unit_invert(f):
    """Invert a recognized unit; AnalyticElement in, AnalyticElement out
    (same for LocalizedElement).

    Recognized classes: constant-times-(1 + t-small) units, chart-ratio
    units (s - c_l)/(s - c_k) against the configured centers, and products
    of those with t-powers (localized input).  Anything else raises
    UnitNotRecognized, which deliberately does not claim non-invertibility.
    """
    if isinstance(f, LocalizedElement):
        body = f.body
        shift = f.tshift
        v = body.valuation()
        if v == INF:
            raise UnitNotRecognized("zero to precision")
        if v > 0:
            body = body.shift_t(-v)
            shift += v
        inv = unit_invert(body)
        return LocalizedElement(inv, -shift)
    if not isinstance(f, AnalyticElement):
        raise TypeError("unit_invert wants an analytic or localized element")
    v = f.valuation()
    if v != 0:
        raise UnitNotRecognized(
            "positive t-order at this precision; invert as a localized element"
        )
    const, pairs = _unit_factorization(f)
    g = f
    inv_parts = []
    for k, l in pairs:
        invf = chart_ratio_unit(f.cfg, l, k, f.precision)  # 1 + (c_l - c_k) z_l
        g = g * invf
        inv_parts.append(invf)
    g = g.scale(const.inverse())
    c2, z2 = g.t0_content()
    if z2 or not c2.is_one():
        raise UnitNotRecognized("recognizer postcondition failed: residual not 1 mod t")
    out = _invert_one_plus_small(g).scale(const.inverse())
    for p in inv_parts:
        out = out * p
    return out


# ---------------------------------------------------------------------------
# linear Weierstrass preparation and prime points
# ---------------------------------------------------------------------------


class PrimePoint:
    """A height-one prime z_j - lambda with its substitution data.

    The substitution sends z_j to lambda + eps and, for other indices k in
    the ring support, z_k to (lambda+eps)/(1 + (c_j - c_k)(lambda+eps));
    construction fails if any of those denominators is a non-unit.
    """

    __slots__ = ("cfg", "chart", "lam", "label", "ring_support", "_subst")

    def __init__(self, cfg: Configuration, chart: int, lam: TruncSeries, label: str = "custom",
                 ring_support: Optional[Iterable[int]] = None):
        self.cfg = cfg
        self.chart = chart
        self.lam = lam
        self.label = label
        support = frozenset(ring_support) if ring_support is not None else frozenset(cfg.indices)
        if chart not in support:
            raise PrimePointError("chart index must belong to the ring support")
        for k in sorted(support):
            if k == chart:
                continue
            d = cfg.one_series(lam.prec) + lam.scale(cfg.centers[chart] - cfg.centers[k])
            if d.coeff(0).is_zero():
                raise PrimePointError(
                    f"substitution denominator for z_{k} is not a unit "
                    f"(1 + (c_{chart} - c_{k})*lambda vanishes mod t); "
                    "shrink the ring support or move the centers"
                )
        self.ring_support = support
        self._subst: dict = {}

    def __repr__(self) -> str:
        return f"PrimePoint({self.label}: z{self.chart} - lambda, support={sorted(self.ring_support)})"

    def _image(self, k: int, budget: int) -> "_EpsPoly":
        key = (k, budget)
        hit = self._subst.get(key)
        if hit is not None:
            return hit
        cfg = self.cfg
        prec = self.lam.prec
        lam_plus = _EpsPoly([self.lam, cfg.one_series(prec)], budget)
        if k == self.chart:
            out = lam_plus
        else:
            dk = cfg.centers[self.chart] - cfg.centers[k]
            denom = _EpsPoly(
                [cfg.one_series(prec) + self.lam.scale(dk),
                 TruncSeries.constant(cfg.field, dk, prec)],
                budget,
            )
            out = lam_plus * denom.invert_unit()
        self._subst[key] = out
        return out


class _EpsPoly:
    """Truncated polynomial in the deformation parameter over K[[t]]/t^N."""

    __slots__ = ("coeffs", "budget")

    def __init__(self, coeffs: list, budget: int):
        self.budget = budget
        self.coeffs = list(coeffs[:budget])

    @staticmethod
    def const(ts: TruncSeries, budget: int) -> "_EpsPoly":
        return _EpsPoly([ts], budget)

    def _field_prec(self):
        c = self.coeffs[0]
        return c.field, c.prec

    def __add__(self, other: "_EpsPoly") -> "_EpsPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        field, prec = self._field_prec()
        zero = TruncSeries.zero(field, prec)
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else zero
            b = other.coeffs[i] if i < len(other.coeffs) else zero
            out.append(a + b)
        return _EpsPoly(out, self.budget)

    def __mul__(self, other: "_EpsPoly") -> "_EpsPoly":
        field, prec = self._field_prec()
        lim = min(self.budget, len(self.coeffs) + len(other.coeffs) - 1)
        out = [TruncSeries.zero(field, prec) for _ in range(lim)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= lim:
                    break
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return _EpsPoly(out, self.budget)

    def scale_series(self, s: TruncSeries) -> "_EpsPoly":
        return _EpsPoly([c * s for c in self.coeffs], self.budget)

    def invert_unit(self) -> "_EpsPoly":
        """Inverse when the eps-free coefficient is a unit series."""
        d0 = self.coeffs[0].invert_unit()
        field, prec = self._field_prec()
        # Newton on the eps filtration
        x = _EpsPoly([d0], self.budget)
        two = _EpsPoly([TruncSeries.constant(field, 2, prec)], self.budget)
        steps = max(1, math.ceil(math.log2(max(2, self.budget))))
        for _ in range(steps):
            x = x * (two + (self * x).negate())
        return x

    def negate(self) -> "_EpsPoly":
        return _EpsPoly([-c for c in self.coeffs], self.budget)

    def order(self):
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        return INF


def weierstrass_prepare_linear(p: AnalyticElement, label: str = "custom",
                               ring_support: Optional[Iterable[int]] = None
                               ) -> tuple[PrimePoint, LocalizedElement]:
    """Factor p = (z_j - lambda) * u for p regular of pseudo-degree one.

    p must be a polynomial in its chart generator with unit linear
    coefficient, higher coefficients of positive t-order, and a unit
    constant term (the degenerate vanishing-constant case is rejected
    rather than silently reduced).
    """
    cfg = p.cfg
    j = p.chart
    if not p.support() <= {j}:
        raise SupportError("preparation input must be supported on its own chart")
    d = p.zdegree()
    if d < 1:
        raise RegularityError("input has no z-term")
    prec = p.precision
    coeffs = [p.f0] + [
        p.zc.get((j, n), cfg.zero_series(prec)) for n in range(1, d + 1)
    ]
    if coeffs[0].coeff(0).is_zero():
        raise RegularityError(
            "constant term vanishes mod t; this degenerate case is rejected"
        )
    if coeffs[1].coeff(0).is_zero():
        raise RegularityError("linear coefficient is not a unit mod t")
    for n in range(2, d + 1):
        if coeffs[n].vt() == 0:
            raise RegularityError(
                f"coefficient of degree {n} must have positive t-order"
            )
    z0 = -(coeffs[0].coeff(0) / coeffs[1].coeff(0))
    lam = poly_simple_root(coeffs, z0)
    # synthetic division by (z - lambda)
    u = [None] * d
    u[d - 1] = coeffs[d]
    for n in range(d - 1, 0, -1):
        u[n - 1] = coeffs[n] + lam * u[n]
    rem = coeffs[0] + lam * u[0]
    if not rem.is_zero():
        raise ArithmeticError("synthetic division left a remainder (internal bug)")
    body = AnalyticElement(
        cfg, j, u[0], {(j, n): u[n] for n in range(1, d)}
    )
    c0, zp = body.t0_content()
    if zp or c0.is_zero():
        raise ArithmeticError("cofactor failed its unit check (internal bug)")
    pt = PrimePoint(cfg, j, lam, label, ring_support)
    return pt, LocalizedElement(body, 0)


def prime_point_valuation(x, pt: PrimePoint, budget: Optional[int] = None) -> int:
    """Order of vanishing of x along z_j = lambda.

    Accepts analytic or localized elements supported inside the prime's
    ring; t-power shifts contribute nothing (t stays a unit at the point).
    """
    x = LocalizedElement.of(x)
    if x.is_zero():
        raise ValueError("element is indistinguishable from 0 at this precision")
    body = x.body.rebase(pt.chart)
    if not body.support() <= pt.ring_support:
        raise SupportError(
            f"element supported on {sorted(body.support())} but the prime only "
            f"substitutes {sorted(pt.ring_support)}"
        )
    B = budget or body.precision
    acc = _EpsPoly.const(body.f0, B)
    pows: dict = {}
    for k, n, s in body.terms():
        img = pows.get((k, n))
        if img is None:
            base = pt._image(k, B)
            img = pows.get((k, n - 1))
            img = base if n == 1 else (img * base if img is not None else _pow_eps(base, n))
            pows[(k, n)] = img
        acc = acc + img.scale_series(s)
    e = acc.order()
    if e == INF:
        raise ValueError(
            "order exceeds the eps budget (or the element vanishes at this precision)"
        )
    return e


def _pow_eps(base: "_EpsPoly", n: int) -> "_EpsPoly":
    out = base
    for _ in range(n - 1):
        out = out * base
    return out


# ---------------------------------------------------------------------------
# seeded random elements (shared by the verification suites)
# ---------------------------------------------------------------------------


def random_element(cfg: Configuration, rng, chart: Optional[int] = None,
                   support: Optional[Iterable[int]] = None, max_zdeg: int = 4,
                   coeff_bound: int = 9, prec: Optional[int] = None,
                   tdeg: Optional[int] = None) -> AnalyticElement:
    """A seeded random canonical form (coefficients uniform in [-bound, bound])."""
    P = prec or cfg.precision
    if chart is None:
        chart = rng.choice(list(cfg.indices))
    if support is None:
        support = [k for k in cfg.indices if rng.random() < 0.6]
    T = P if tdeg is None else min(tdeg, P)

    def rand_series():
        vals = [rng.randint(-coeff_bound, coeff_bound) for _ in range(T)]
        return cfg.series(vals + [0] * (P - T), P)

    zc = {}
    for k in support:
        for n in range(1, max_zdeg + 1):
            if rng.random() < 0.5:
                zc[(k, n)] = rand_series()
    return AnalyticElement(cfg, chart, rand_series(), zc)
