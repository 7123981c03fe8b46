"""Independent expansion oracle.

Everything in `analytic` reduces products through the partial-fraction
rewrite rule.  This module checks those results by a completely different
route: expand symbolic expressions in X, Y and the generators z_k as
honest bivariate series in (z_j, t) for a chosen chart j, using nothing but
geometric series.  The two paths share only the exact-rational plumbing, so
agreement is meaningful evidence.

Expressions are tiny ASTs built with operator syntax:

    src = (const(1) + zvar(2)) * (const(1) - zvar(1))
    oracle_expand(src, cfg, chart=0, zdepth=8)

Division is supported only when the denominator, after peeling its t-power,
has an invertible constant term; that covers products of chart uniformizers
and chart-ratio units, which is all the constructions here ever divide by.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import gcd
from typing import Optional

from .scalars import FieldDescriptor, Scalar
from .series import TruncSeries

__all__ = [
    "OracleError",
    "Expr",
    "const",
    "xvar",
    "yvar",
    "zvar",
    "OracleSeries",
    "OracleCache",
    "oracle_expand",
    "oracle_of_element",
    "source_of",
    "lin_indep_check",
]


class OracleError(ArithmeticError):
    """Expression not expandable (non-unit denominator or bad shape)."""


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------


class Expr:
    def __add__(self, other):
        return _Add(self, _wrap(other))

    def __radd__(self, other):
        return _Add(_wrap(other), self)

    def __sub__(self, other):
        return _Add(self, _Neg(_wrap(other)))

    def __rsub__(self, other):
        return _Add(_wrap(other), _Neg(self))

    def __mul__(self, other):
        return _Mul(self, _wrap(other))

    def __rmul__(self, other):
        return _Mul(_wrap(other), self)

    def __neg__(self):
        return _Neg(self)

    def __pow__(self, e: int):
        return _Pow(self, e)

    def __truediv__(self, other):
        return _Div(self, _wrap(other))


class _Const(Expr):
    def __init__(self, value):
        self.value = value


class _Var(Expr):
    def __init__(self, name: str):
        self.name = name


class _ZVar(Expr):
    def __init__(self, k: int):
        self.k = k


class _Add(Expr):
    def __init__(self, a, b):
        self.a, self.b = a, b


class _Mul(Expr):
    def __init__(self, a, b):
        self.a, self.b = a, b


class _Neg(Expr):
    def __init__(self, a):
        self.a = a


class _Pow(Expr):
    def __init__(self, a, e: int):
        if e < 0:
            raise ValueError("negative powers: spell them as divisions")
        self.a, self.e = a, e


class _Div(Expr):
    def __init__(self, a, b):
        self.a, self.b = a, b


def _wrap(v) -> Expr:
    return v if isinstance(v, Expr) else _Const(v)


def const(v) -> Expr:
    return _Const(v)


def xvar() -> Expr:
    return _Var("X")


def yvar() -> Expr:
    return _Var("Y")


def zvar(k: int) -> Expr:
    return _ZVar(k)


# ---------------------------------------------------------------------------
# windowed bivariate series in (z_j, t)
# ---------------------------------------------------------------------------


class OracleSeries:
    """Exact expansion window: z-exponent < zdepth, t-exponent < tprec.

    t-exponents may be negative (the uniformizers get inverted); the window
    only cuts above.  Entries carry one common denominator.
    """

    __slots__ = ("field", "zdepth", "tprec", "den", "data")

    def __init__(self, field: FieldDescriptor, zdepth: int, tprec: int, den: int, data: dict):
        self.field = field
        self.zdepth = zdepth
        self.tprec = tprec
        g = den
        for v in data.values():
            for x in v:
                if x:
                    g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            data = {k: tuple(x // g for x in v) for k, v in data.items()}
            den //= g
        self.den = den
        self.data = {k: v for k, v in data.items() if any(v)}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field, zdepth, tprec) -> "OracleSeries":
        return OracleSeries(field, zdepth, tprec, 1, {})

    @staticmethod
    def from_scalar_terms(field, zdepth, tprec, terms: dict) -> "OracleSeries":
        den = 1
        scal = {k: v if isinstance(v, Scalar) else Scalar.of(field, v) for k, v in terms.items()}
        for s in scal.values():
            for c in s.coords:
                den = den * c.denominator // gcd(den, c.denominator)
        data = {}
        for (m, n), s in scal.items():
            if m < 0:
                raise ValueError("negative z-exponents cannot appear")
            if m >= zdepth or n >= tprec:
                continue
            data[(m, n)] = tuple(int(c * den) for c in s.coords)
        return OracleSeries(field, zdepth, tprec, den, data)

    # -- views ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.data

    def coeff(self, m: int, n: int) -> Scalar:
        v = self.data.get((m, n))
        if v is None:
            return Scalar.zero(self.field)
        return Scalar(self.field, tuple(Fraction(x, self.den) for x in v))

    def __eq__(self, other) -> bool:
        if not isinstance(other, OracleSeries):
            return NotImplemented
        return (
            self.field == other.field
            and self.zdepth == other.zdepth
            and self.tprec == other.tprec
            and self.den == other.den
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.zdepth, self.tprec, self.den, tuple(sorted(self.data.items()))))

    def __repr__(self):
        parts = [f"({self.coeff(m, n)})*z^{m}*t^{n}" for (m, n) in sorted(self.data)]
        if len(parts) > 8:
            parts = parts[:8] + ["..."]
        return f"O<{' + '.join(parts) if parts else '0'}>"

    # -- ring operations --------------------------------------------------------

    def _check(self, other: "OracleSeries"):
        if (self.field, self.zdepth, self.tprec) != (other.field, other.zdepth, other.tprec):
            raise ValueError("oracle series with different windows")

    def __add__(self, other: "OracleSeries") -> "OracleSeries":
        self._check(other)
        g = gcd(self.den, other.den)
        den = self.den // g * other.den
        f1, f2 = other.den // g, self.den // g
        dim = self.field.dim
        data = {}
        for k in self.data.keys() | other.data.keys():
            a = self.data.get(k, (0,) * dim)
            b = other.data.get(k, (0,) * dim)
            data[k] = tuple(f1 * x + f2 * y for x, y in zip(a, b))
        return OracleSeries(self.field, self.zdepth, self.tprec, den, data)

    def __neg__(self) -> "OracleSeries":
        return OracleSeries(
            self.field, self.zdepth, self.tprec, self.den,
            {k: tuple(-x for x in v) for k, v in self.data.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "OracleSeries") -> "OracleSeries":
        self._check(other)
        dim = self.field.dim
        out: dict = {}
        for (m1, n1), v1 in self.data.items():
            for (m2, n2), v2 in other.data.items():
                m, n = m1 + m2, n1 + n2
                if m >= self.zdepth or n >= self.tprec:
                    continue
                if dim == 1:
                    p = (v1[0] * v2[0],)
                else:
                    a, b = v1
                    c, d = v2
                    p = (a * c - b * d, a * d + b * c)
                cur = out.get((m, n))
                out[(m, n)] = p if cur is None else tuple(x + y for x, y in zip(cur, p))
        return OracleSeries(self.field, self.zdepth, self.tprec, self.den * other.den, out)

    def scale(self, s: Scalar) -> "OracleSeries":
        unit = OracleSeries.from_scalar_terms(self.field, self.zdepth, self.tprec, {(0, 0): s})
        return self * unit

    def shift_t(self, e: int) -> "OracleSeries":
        data = {(m, n + e): v for (m, n), v in self.data.items() if n + e < self.tprec}
        return OracleSeries(self.field, self.zdepth, self.tprec, self.den, data)

    def pow(self, e: int) -> "OracleSeries":
        out = OracleSeries.from_scalar_terms(self.field, self.zdepth, self.tprec, {(0, 0): 1})
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def invert(self) -> "OracleSeries":
        """Inverse of t^v * (unit of K[z][[z, t]]); error otherwise."""
        if self.is_zero():
            raise OracleError("cannot invert 0 (to the window)")
        v = min(n for (_m, n) in self.data)
        u = self.shift_t(-v) if v else self
        c0 = u.coeff(0, 0)
        if c0.is_zero():
            raise OracleError(
                "denominator not expandable: constant term is not a unit after peeling t"
            )
        x = OracleSeries.from_scalar_terms(self.field, self.zdepth, self.tprec, {(0, 0): c0.inverse()})
        two = OracleSeries.from_scalar_terms(self.field, self.zdepth, self.tprec, {(0, 0): 2})
        steps = max(1, math.ceil(math.log2(self.zdepth + self.tprec)))
        for _ in range(steps):
            x = x * (two - u * x)
        return x.shift_t(-v)


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------


def oracle_expand(expr: Expr, cfg, chart: int, zdepth: int,
                  tprec: Optional[int] = None) -> OracleSeries:
    """Expand expr in (z_chart, t_chart) inside the window (zdepth, tprec).

    X maps to (1 + c_j z) t, Y to z t, and foreign generators z_k expand by
    the geometric series z/(1 + (c_j - c_k) z).  The computation never goes
    through canonical-form arithmetic.
    """
    field = cfg.field
    N = tprec or cfg.precision
    M = zdepth

    def leaf_z(k: int) -> OracleSeries:
        if k == chart:
            return OracleSeries.from_scalar_terms(field, M, N, {(1, 0): 1})
        delta = cfg.centers[chart] - cfg.centers[k]
        terms = {}
        c = Scalar.one(field)
        for l in range(1, M):
            terms[(l, 0)] = c
            c = c * (-delta)
        return OracleSeries.from_scalar_terms(field, M, N, terms)

    def walk(e: Expr) -> OracleSeries:
        if isinstance(e, _Const):
            return OracleSeries.from_scalar_terms(field, M, N, {(0, 0): cfg.scalar(e.value)})
        if isinstance(e, _Var):
            if e.name == "X":
                return OracleSeries.from_scalar_terms(
                    field, M, N, {(0, 1): 1, (1, 1): cfg.centers[chart]}
                )
            if e.name == "Y":
                return OracleSeries.from_scalar_terms(field, M, N, {(1, 1): 1})
            raise ValueError(f"unknown variable {e.name}")
        if isinstance(e, _ZVar):
            if e.k not in cfg.indices:
                raise ValueError(f"no center with index {e.k}")
            return leaf_z(e.k)
        if isinstance(e, _Add):
            return walk(e.a) + walk(e.b)
        if isinstance(e, _Mul):
            return walk(e.a) * walk(e.b)
        if isinstance(e, _Neg):
            return -walk(e.a)
        if isinstance(e, _Pow):
            return walk(e.a).pow(e.e)
        if isinstance(e, _Div):
            return walk(e.a) * walk(e.b).invert()
        raise TypeError(f"not an expression: {e!r}")

    return walk(expr)


def _window_combine(field, zdepth: int, tprec: int, parts) -> OracleSeries:
    """One-pass linear combination sum(scalar * series) over a shared window."""
    den = 1
    prepared = []
    for ser, sc in parts:
        nums = []
        sden = 1
        for c in sc.coords:
            sden = sden * c.denominator // gcd(sden, c.denominator)
        nums = [int(c * sden) for c in sc.coords]
        pden = ser.den * sden
        prepared.append((ser, nums, pden))
        den = den * pden // gcd(den, pden)
    dim = field.dim
    out: dict = {}
    for ser, nums, pden in prepared:
        f = den // pden
        if dim == 1:
            a = nums[0] * f
            if not a:
                continue
            for key, v in ser.data.items():
                cur = out.get(key)
                out[key] = (cur[0] + a * v[0],) if cur else (a * v[0],)
        else:
            a, b = nums[0] * f, nums[1] * f
            if not a and not b:
                continue
            for key, v in ser.data.items():
                x, y = v
                add = (a * x - b * y, a * y + b * x)
                cur = out.get(key)
                out[key] = tuple(p + q for p, q in zip(cur, add)) if cur else add
    return OracleSeries(field, zdepth, tprec, den, out)


class OracleCache:
    """Shared power ladders for expanding many elements in one window."""

    def __init__(self, cfg, zdepth: int, tprec: Optional[int] = None):
        self.cfg = cfg
        self.zdepth = zdepth
        self.tprec = tprec or cfg.precision
        self._pow: dict = {}

    def t_power(self, chart: int, src_chart: int, m: int) -> OracleSeries:
        key = ("t", chart, src_chart, m)
        hit = self._pow.get(key)
        if hit is None:
            if m == 0:
                hit = OracleSeries.from_scalar_terms(
                    self.cfg.field, self.zdepth, self.tprec, {(0, 0): 1}
                )
            elif m == 1:
                c = self.cfg.centers[chart] - self.cfg.centers[src_chart]
                # X - c_src Y = t + (c_chart - c_src) z t in the chart window
                terms = {(0, 1): Scalar.one(self.cfg.field)}
                if not c.is_zero():
                    terms[(1, 1)] = c
                hit = OracleSeries.from_scalar_terms(
                    self.cfg.field, self.zdepth, self.tprec, terms
                )
            else:
                hit = self.t_power(chart, src_chart, m - 1) * self.t_power(chart, src_chart, 1)
            self._pow[key] = hit
        return hit

    def z_power(self, chart: int, k: int, n: int) -> OracleSeries:
        key = ("z", chart, k, n)
        hit = self._pow.get(key)
        if hit is None:
            if n == 1:
                hit = oracle_expand(zvar(k), self.cfg, chart, self.zdepth, self.tprec)
            else:
                hit = self.z_power(chart, k, n - 1) * self.z_power(chart, k, 1)
            self._pow[key] = hit
        return hit


def oracle_of_element(f, chart: int, cache: OracleCache) -> OracleSeries:
    """Expansion of a canonical form's defining expression.

    Reads only the stored data of f; all products happen on the oracle side
    (power ladders shared through the cache), so this is the same
    independent route as expanding source_of(f), just without re-walking an
    expression tree per coefficient.
    """
    cfg = f.cfg
    field = cfg.field
    M, N = cache.zdepth, cache.tprec

    def series_part(s) -> OracleSeries:
        parts = []
        for m in range(s.prec):
            c = s.coeff(m)
            if not c.is_zero():
                parts.append((cache.t_power(chart, f.chart, m), c))
        if not parts:
            return OracleSeries.zero(field, M, N)
        return _window_combine(field, M, N, parts)

    total = series_part(f.f0)
    for k, n, s in f.terms():
        total = total + series_part(s) * cache.z_power(chart, k, n)
    return total


def source_of(f) -> Expr:
    """The defining expression of a canonical form, spelled in X, Y, z_k.

    The chart uniformizer is written out as X - c_j Y, so the result is a
    chart-free symbolic object and can be expanded in any chart.
    """
    cfg = f.cfg
    cj = cfg.centers[f.chart]
    tex = xvar() - const(cj) * yvar()

    def series_expr(s: TruncSeries) -> Expr:
        out: Expr = const(0)
        for m in range(s.prec):
            c = s.coeff(m)
            if not c.is_zero():
                out = out + const(c) * tex ** m
        return out

    total = series_expr(f.f0)
    for k, n, s in f.terms():
        total = total + series_expr(s) * zvar(k) ** n
    return total


def lin_indep_check(cfg, coeffs: dict, chart: int = 0, zdepth: Optional[int] = None) -> bool:
    """Is the combination a_0 + sum a_{i,n} z_i^n zero exactly when all
    coefficients are zero?

    coeffs maps None (the constant slot) or (i, n) to scalars.  The verdict
    is computed both on the canonical form and through the oracle; they must
    agree, and the returned value is "combination == 0".
    """
    from .analytic import AnalyticElement

    a0 = cfg.scalar(coeffs.get(None, 0))
    zc = {}
    expr: Expr = const(a0)
    maxdeg = 1
    for key, v in coeffs.items():
        if key is None:
            continue
        i, n = key
        s = cfg.scalar(v)
        maxdeg = max(maxdeg, n)
        if not s.is_zero():
            zc[(i, n)] = TruncSeries.constant(cfg.field, s, cfg.precision)
            expr = expr + const(s) * zvar(i) ** n
    elem = AnalyticElement(
        cfg, chart, TruncSeries.constant(cfg.field, a0, cfg.precision), zc
    )
    canonical_zero = elem.is_zero()
    M = zdepth or (maxdeg + 2)
    oracle_zero = oracle_expand(expr, cfg, chart, M).is_zero()
    if canonical_zero != oracle_zero:
        raise OracleError("canonical form and oracle disagree on vanishing (internal bug)")
    return canonical_zero
