"""Radical extensions over the analytic layer and the division-algebra
valuation certificate.

The pivotal scenario fixes two indices i != j and an exponent k >= 2 and
builds, writing t_i = X - c_i Y and t_j = X - c_j Y:

    a  = (X - c_i Y + Y^k)/(X - c_i Y) = 1 + z_i^k t_i^{k-1}
    b  = (X + c_i Y - Y^k)/(X - c_i Y) = 1 + 2 c_i z_i - z_i^k t_i^{k-1}
    r  = 1 + (c_j + c_i) z_j - t_j^{k-1} z_j^k
    r' = 1 + (c_j - c_i) z_j + t_j^{k-1} z_j^k
    u2 = 1 + (c_j - c_i) z_j

and verifies the chart-j identities b*u2 = r and a*u2 = r' before anything
else runs; every later valuation of a and b is computed through those
verified presentations.

Kummer coordinates carry an explicit exponent of the unit u2 (an element
together with "divide by u2^e"), because the radicand a itself is r'/u2
and materializing 1/u2 would leave the subring where the prime-point
substitution makes sense.  The prime valuations of u2 at both points are
checked to be 0 when the scenario is built, so the exponent never shifts a
valuation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .analytic import (
    AnalyticElement,
    Configuration,
    LocalizedElement,
    PrimePoint,
    SupportError,
    prime_point_valuation,
    unit_invert,
    weierstrass_prepare_linear,
)
from .scalars import FieldError, Scalar, cyclotomic_field, root_of_unity
from .series import BivarSeries, TruncSeries, prime_valuation as bivar_prime_valuation

__all__ = [
    "ScenarioError",
    "ExtensionError",
    "hensel_root",
    "Scenario",
    "build_scenario",
    "lift_configuration",
    "lift_element",
    "KummerExtension",
    "KummerElement",
    "kummer_mul",
    "galois_act",
    "norm",
    "ext_valuation",
    "DivisionAlgebraCertificate",
    "certify_division_algebra",
    "BiRadicalGrid",
    "grid_norm_identity",
    "quaternion_mul",
    "quaternion_conj",
    "quaternion_norm",
]


class ScenarioError(ValueError):
    """Scenario parameters violate the construction's constraints."""


class ExtensionError(ValueError):
    """Kummer-extension misuse (mismatched extensions, missing roots)."""


# ---------------------------------------------------------------------------
# Hensel lifting
# ---------------------------------------------------------------------------


def hensel_root(a: AnalyticElement, q: int) -> AnalyticElement:
    """The q-th root of a congruent to 1, for a = 1 mod t.

    Newton iteration s <- s - (s^q - a)/(q s^{q-1}); the correction stays in
    the ideal, so s = 1 mod t throughout, and the result is verified to
    satisfy s^q = a within the window before returning.
    """
    if q < 1:
        raise ValueError("root order must be positive")
    cfg = a.cfg
    if not a.support() <= {a.chart}:
        raise SupportError("Hensel input must live in the chart's own subring")
    one = AnalyticElement.one(cfg, a.chart, a.precision)
    if (a - one).valuation() < 1:
        raise ValueError("Hensel root needs a = 1 mod t")
    if q == 1:
        return a
    qs = Scalar.of(cfg.field, q)
    s = one
    for _ in range(max(1, math.ceil(math.log2(a.precision))) + 1):
        sq_1 = s ** (q - 1)
        ds = unit_invert(sq_1.scale(qs))
        s = s - (sq_1 * s - a) * ds
    if not (s ** q).equals(a):
        raise ArithmeticError("Hensel iteration failed to converge (internal bug)")
    return s


# ---------------------------------------------------------------------------
# the scenario
# ---------------------------------------------------------------------------


_SUPPORTED_DEGREES = (1, 2, 4)


@dataclass
class Scenario:
    cfg: Configuration
    i: int
    j: int
    k: int
    q: int
    qprime: int
    a: AnalyticElement
    b: AnalyticElement
    r: AnalyticElement
    rp: AnalyticElement
    u2: AnalyticElement
    f_bv: BivarSeries
    g_bv: BivarSeries
    t_bv: BivarSeries
    pt_r: PrimePoint
    pt_rp: PrimePoint
    unit_r: LocalizedElement
    unit_rp: LocalizedElement

    @property
    def full_degree(self) -> int:
        return self.q * self.qprime

    def params(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "k": self.k,
            "q": self.q,
            "qprime": self.qprime,
            "config": self.cfg.to_dict(),
        }


def build_scenario(cfg: Configuration, i: int, j: int, k: int, q: int, qprime: int) -> Scenario:
    """Construct and cross-validate the scenario elements.

    Rejects center configurations that break the construction (i = j,
    c_j = -c_i) and degrees beyond the supported symbol algebras.  The
    chart-j presentations of a and b are verified against their definitions
    as X,Y-fractions before the scenario is handed out.
    """
    if i == j or i not in cfg.indices or j not in cfg.indices:
        raise ScenarioError("need two distinct configured indices")
    if k < 2:
        raise ScenarioError("exponent k must be at least 2")
    if q not in _SUPPORTED_DEGREES or qprime not in _SUPPORTED_DEGREES:
        raise ScenarioError(f"degrees limited to {_SUPPORTED_DEGREES}")
    if q * qprime not in _SUPPORTED_DEGREES:
        raise ScenarioError("combined degree q*q' beyond the supported symbol algebras")
    ci, cj = cfg.centers[i], cfg.centers[j]
    if (cj + ci).is_zero():
        raise ScenarioError("centers with c_j = -c_i break the leading unit of r")
    N = cfg.precision
    if N <= k:
        raise ScenarioError("precision too small to see the t^{k-1} terms")

    two_ci = ci + ci
    a_el = AnalyticElement.from_terms(cfg, i, 1, {(i, k): cfg.t_series(k - 1)})
    b_el = AnalyticElement.from_terms(
        cfg, i, 1, {(i, 1): two_ci, (i, k): cfg.t_series(k - 1, coeff=-1)}
    )
    r_el = AnalyticElement.from_terms(
        cfg, j, 1, {(j, 1): cj + ci, (j, k): cfg.t_series(k - 1, coeff=-1)}
    )
    rp_el = AnalyticElement.from_terms(
        cfg, j, 1, {(j, 1): cj - ci, (j, k): cfg.t_series(k - 1)}
    )
    u2_el = AnalyticElement.from_terms(cfg, j, 1, {(j, 1): cj - ci})

    if not (b_el.rebase(j) * u2_el).equals(r_el):
        raise ScenarioError("internal identity b*u2 = r failed (bug)")
    if not (a_el.rebase(j) * u2_el).equals(rp_el):
        raise ScenarioError("internal identity a*u2 = r' failed (bug)")

    ring = frozenset(cfg.indices) - {i}
    pt_r, unit_r = weierstrass_prepare_linear(r_el, "r", ring_support=ring)
    pt_rp, unit_rp = weierstrass_prepare_linear(rp_el, "r'", ring_support=ring)
    for pt, name in ((pt_r, "r"), (pt_rp, "r'")):
        if prime_point_valuation(u2_el, pt) != 0:
            raise ScenarioError(f"u2 is not a unit along {name} (degenerate centers)")

    # X,Y pictures in the chart-i coordinates (t = X - c_i Y, Y)
    f_bv = BivarSeries.from_terms(cfg.field, {(1, 0): 1, (0, k): 1}, N)
    g_bv = BivarSeries.from_terms(cfg.field, {(1, 0): 1, (0, 1): two_ci, (0, k): -1}, N)
    t_bv = BivarSeries.from_terms(cfg.field, {(1, 0): 1}, N)

    return Scenario(
        cfg, i, j, k, q, qprime,
        a_el, b_el, r_el, rp_el, u2_el, f_bv, g_bv, t_bv,
        pt_r, pt_rp, unit_r, unit_rp,
    )


# ---------------------------------------------------------------------------
# scalar lifting (rationals -> order-4 cyclotomic), used when the norm layer
# needs a root of unity the base field lacks
# ---------------------------------------------------------------------------


def lift_configuration(cfg: Configuration) -> Configuration:
    if cfg.field.dim != 1:
        return cfg
    F2 = cyclotomic_field(4)
    centers = [Scalar.of(F2, c.coords[0]) for c in cfg.centers]
    return Configuration(F2, centers, cfg.precision)


def lift_element(f: AnalyticElement, cfg2: Configuration) -> AnalyticElement:
    if f.cfg.field == cfg2.field:
        return f

    def lift_series(s: TruncSeries) -> TruncSeries:
        comps = [list(s._c[0]), [0] * s.prec]
        return TruncSeries(cfg2.field, s.prec, s.den, comps)

    return AnalyticElement(
        cfg2, f.chart, lift_series(f.f0), {kn: lift_series(s) for kn, s in f.zc.items()}
    )


def lift_scenario(sc: Scenario) -> Scenario:
    if sc.cfg.field.dim != 1:
        return sc
    return build_scenario(lift_configuration(sc.cfg), sc.i, sc.j, sc.k, sc.q, sc.qprime)


# ---------------------------------------------------------------------------
# Kummer extensions with u2-localized coordinates
# ---------------------------------------------------------------------------


class _Coord:
    """numerator * u2^{-power}: a localized element presented against the
    verified unit u2 (power 0 when no unit is involved)."""

    __slots__ = ("elem", "u2pow")

    def __init__(self, elem, u2pow: int = 0):
        self.elem = LocalizedElement.of(elem)
        self.u2pow = u2pow

    def is_zero(self) -> bool:
        return self.elem.is_zero()


@dataclass
class KummerExtension:
    """base(alpha) with alpha^degree = radicand, Galois group generated by
    alpha -> zeta * alpha."""

    cfg: Configuration
    chart: int
    degree: int
    zeta: Scalar
    radicand: _Coord
    u2: Optional[AnalyticElement] = None

    @staticmethod
    def create(cfg: Configuration, chart: int, degree: int, radicand,
               u2: Optional[AnalyticElement] = None, radicand_u2_power: int = 0
               ) -> "KummerExtension":
        if degree not in _SUPPORTED_DEGREES:
            raise ExtensionError(f"extension degree limited to {_SUPPORTED_DEGREES}")
        try:
            zeta = root_of_unity(degree, cfg.field)
        except FieldError as exc:
            raise ExtensionError(
                f"base field lacks a primitive {degree}-th root of unity: {exc}"
            ) from exc
        if radicand_u2_power and u2 is None:
            raise ExtensionError("a u2 power needs the unit itself")
        return KummerExtension(
            cfg, chart, degree, zeta, _Coord(radicand, radicand_u2_power), u2
        )

    def element(self, coords: Sequence) -> "KummerElement":
        cs = []
        for c in coords:
            cs.append(c if isinstance(c, _Coord) else _Coord(c))
        if len(cs) != self.degree:
            raise ExtensionError(f"need exactly {self.degree} coordinates")
        return KummerElement(self, tuple(cs))

    def generator(self) -> "KummerElement":
        zero = _Coord(AnalyticElement.zero(self.cfg, self.chart, self.cfg.precision))
        one = _Coord(AnalyticElement.one(self.cfg, self.chart, self.cfg.precision))
        coords = [zero] * self.degree
        coords[1 % self.degree] = one
        return KummerElement(self, tuple(coords))

    def scalar_embed(self, x) -> "KummerElement":
        zero = _Coord(AnalyticElement.zero(self.cfg, self.chart, self.cfg.precision))
        coords = [_Coord(x)] + [zero] * (self.degree - 1)
        return KummerElement(self, tuple(coords))


class KummerElement:
    """Coordinates b_0, ..., b_{q-1} against the basis 1, alpha, ..., alpha^{q-1}."""

    __slots__ = ("ext", "coords")

    def __init__(self, ext: KummerExtension, coords: tuple):
        self.ext = ext
        self.coords = coords

    @property
    def ext_degree(self) -> int:
        return self.ext.degree

    @property
    def a_ref(self) -> _Coord:
        """The radicand of the hosting extension."""
        return self.ext.radicand

    def _check(self, other: "KummerElement"):
        if self.ext is not other.ext and (
            self.ext.degree != other.ext.degree or self.ext.cfg != other.ext.cfg
        ):
            raise ExtensionError("elements of different extensions")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def _coord_add(self, c1: _Coord, c2: _Coord) -> _Coord:
        if c1.is_zero():
            return c2
        if c2.is_zero():
            return c1
        p = max(c1.u2pow, c2.u2pow)
        e1, e2 = c1.elem, c2.elem
        u2 = self.ext.u2
        for _ in range(p - c1.u2pow):
            e1 = e1 * LocalizedElement.of(u2)
        for _ in range(p - c2.u2pow):
            e2 = e2 * LocalizedElement.of(u2)
        return _Coord(e1 + e2, p)

    def __add__(self, other: "KummerElement") -> "KummerElement":
        self._check(other)
        return KummerElement(
            self.ext,
            tuple(self._coord_add(a, b) for a, b in zip(self.coords, other.coords)),
        )

    def __neg__(self) -> "KummerElement":
        return KummerElement(self.ext, tuple(_Coord(-c.elem, c.u2pow) for c in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "KummerElement") -> "KummerElement":
        self._check(other)
        q = self.ext.degree
        rad = self.ext.radicand
        zero = _Coord(AnalyticElement.zero(self.ext.cfg, self.ext.chart, self.ext.cfg.precision))
        out = [zero] * q
        for n1, c1 in enumerate(self.coords):
            if c1.is_zero():
                continue
            for n2, c2 in enumerate(other.coords):
                if c2.is_zero():
                    continue
                n = n1 + n2
                prod = _Coord(c1.elem * c2.elem, c1.u2pow + c2.u2pow)
                if n >= q:
                    n -= q
                    prod = _Coord(prod.elem * rad.elem, prod.u2pow + rad.u2pow)
                out[n] = self._coord_add(out[n], prod)
        return KummerElement(self.ext, tuple(out))

    def scale(self, s) -> "KummerElement":
        return KummerElement(
            self.ext, tuple(_Coord(c.elem.scale(s), c.u2pow) for c in self.coords)
        )

    def mul_base(self, x) -> "KummerElement":
        """Multiply by a base-ring element (no wrap-around)."""
        xl = LocalizedElement.of(x)
        return KummerElement(
            self.ext, tuple(_Coord(c.elem * xl, c.u2pow) for c in self.coords)
        )

    def galois(self, l: int = 1) -> "KummerElement":
        """The action alpha -> zeta^l alpha: coordinate n picks up zeta^{ln}."""
        z = self.ext.zeta ** l
        out = []
        zpow = Scalar.one(self.ext.cfg.field)
        for n, c in enumerate(self.coords):
            out.append(_Coord(c.elem.scale(zpow), c.u2pow) if n else c)
            zpow = zpow * z
        return KummerElement(self.ext, tuple(out))

    def norm(self) -> _Coord:
        """Product of all Galois conjugates; lands in the base (verified)."""
        acc = self
        for l in range(1, self.ext.degree):
            acc = acc * self.galois(l)
        for n in range(1, self.ext.degree):
            if not acc.coords[n].is_zero():
                raise ArithmeticError(
                    "norm has a nonzero higher coordinate (internal inconsistency)"
                )
        return acc.coords[0]

    def valuation(self, pt: PrimePoint) -> int:
        """min over coordinates of the prime valuation (unramified formula).

        u2 powers contribute nothing: the scenario validates v(u2) = 0 at
        its points before elements like this exist.
        """
        best = None
        for c in self.coords:
            if c.is_zero():
                continue
            v = prime_point_valuation(c.elem, pt)
            best = v if best is None else min(best, v)
        if best is None:
            raise ValueError("element is zero at this precision")
        return best

    def materialized_coords(self) -> tuple:
        """Plain localized coordinates (clears u2 powers by inversion)."""
        out = []
        for c in self.coords:
            e = c.elem
            if c.u2pow:
                inv = unit_invert(LocalizedElement.of(self.ext.u2))
                for _ in range(c.u2pow):
                    e = e * inv
            out.append(e)
        return tuple(out)


def kummer_mul(x: KummerElement, y: KummerElement) -> KummerElement:
    return x * y


def galois_act(l: int, x: KummerElement) -> KummerElement:
    return x.galois(l)


def norm(x: KummerElement) -> _Coord:
    return x.norm()


def ext_valuation(x: KummerElement, pt: PrimePoint) -> int:
    return x.valuation(pt)


# ---------------------------------------------------------------------------
# the certificate
# ---------------------------------------------------------------------------


@dataclass
class DivisionAlgebraCertificate:
    scenario: dict
    table: dict
    norm_law: dict
    excluded_powers: list
    assumptions: list
    verdict: str
    tampered: bool = False

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "valuation_table": self.table,
            "norm_law": self.norm_law,
            "excluded_powers": self.excluded_powers,
            "assumptions": self.assumptions,
            "verdict": self.verdict,
            "tampered": self.tampered,
        }


_EXPECTED_TABLE = {
    "v_f(a)": 1, "v_f(b)": 0, "v_g(a)": 0, "v_g(b)": 1,
    "v_r(a)": 0, "v_r(b)": 1, "v_r'(a)": 1, "v_r'(b)": 0,
}


def certify_division_algebra(sc: Scenario, tamper_b: bool = False,
                             norm_samples: int = 8, seed: int = 42,
                             norm_precision: Optional[int] = None
                             ) -> DivisionAlgebraCertificate:
    """Compute the full valuation table and norm-law evidence.

    With tamper_b the element b is replaced by b^2 throughout the table (a
    deliberate negative control: the table rows for b double and the
    verdict must come out refuted).
    """
    bexp = 2 if tamper_b else 1

    def vf(gnum: BivarSeries, e: int, fdiv: BivarSeries) -> int:
        # valuation of (gnum/t)^e along fdiv, via the quotient rule
        return e * (bivar_prime_valuation(gnum, fdiv) - bivar_prime_valuation(sc.t_bv, fdiv))

    table = {}
    table["v_f(a)"] = vf(sc.f_bv, 1, sc.f_bv)
    table["v_f(b)"] = vf(sc.g_bv, bexp, sc.f_bv)
    table["v_g(a)"] = vf(sc.f_bv, 1, sc.g_bv)
    table["v_g(b)"] = vf(sc.g_bv, bexp, sc.g_bv)

    def vpt(num: AnalyticElement, e: int, pt: PrimePoint) -> int:
        return e * (prime_point_valuation(num, pt) - prime_point_valuation(sc.u2, pt))

    table["v_r(a)"] = vpt(sc.rp, 1, sc.pt_r)
    table["v_r(b)"] = vpt(sc.r, bexp, sc.pt_r)
    table["v_r'(a)"] = vpt(sc.rp, 1, sc.pt_rp)
    table["v_r'(b)"] = vpt(sc.r, bexp, sc.pt_rp)

    rows = {
        name: {"computed": got, "expected": _EXPECTED_TABLE[name], "ok": got == _EXPECTED_TABLE[name]}
        for name, got in table.items()
    }

    # norm-valuation law over the full-degree extension of radicand a
    Q = sc.full_degree
    law = {"degree": Q, "samples": 0, "failures": []}
    if Q > 1:
        law_sc = sc
        if not sc.cfg.field.has_root_of_unity(Q):
            law_sc = lift_scenario(sc)
        if norm_precision and norm_precision < law_sc.cfg.precision:
            law_cfg = Configuration(
                law_sc.cfg.field, law_sc.cfg.centers, norm_precision
            )
            law_sc = build_scenario(law_cfg, sc.i, sc.j, sc.k, sc.q, sc.qprime)
        ext = KummerExtension.create(
            law_sc.cfg, law_sc.j, Q,
            law_sc.rp.rebase(law_sc.j), u2=law_sc.u2, radicand_u2_power=1,
        )
        rng = random.Random(seed)
        results = _norm_law_samples(law_sc, ext, rng, norm_samples)
        law.update(results)
    law["ok"] = not law["failures"]

    v_r_b = table["v_r(b)"]
    excluded = [m for m in range(1, Q) if (m * v_r_b) % Q != 0]
    all_excluded = len(excluded) == Q - 1

    assumptions = [
        "Eisenstein input recorded from the computed row v_r'(a) = 1",
        "residue separability recorded from v_r(a) = 0 with the root order invertible in K",
        "unramifiedness of the radical extension along r is an inference from those "
        "two facts, not re-proved here",
        "base extension restricted to the trivial case E' = E; the growth of k for "
        "general E' is a configuration knob",
    ]

    ok = all(row["ok"] for row in rows.values()) and law["ok"] and all_excluded
    return DivisionAlgebraCertificate(
        scenario=sc.params(),
        table=rows,
        norm_law=law,
        excluded_powers=excluded,
        assumptions=assumptions,
        verdict="certified" if ok else "refuted",
        tampered=tamper_b,
    )


def random_ring_element(cfg: Configuration, rng, ring: Iterable[int], chart: int,
                        max_zdeg: int = 1, tslots: int = 3) -> AnalyticElement:
    """Small random element supported inside the given index set."""
    ring = sorted(ring)
    zc = {}
    prec = cfg.precision
    for k in ring:
        for n in range(1, max_zdeg + 1):
            if rng.random() < 0.5:
                vals = [0] * prec
                for _ in range(tslots):
                    vals[rng.randrange(min(4, prec))] = rng.randint(-9, 9)
                zc[(k, n)] = cfg.series(vals)
    vals = [0] * prec
    vals[0] = rng.randint(1, 9)  # keep the sample a unit at the point
    for _ in range(tslots - 1):
        vals[rng.randrange(min(4, prec))] = rng.randint(-9, 9)
    return AnalyticElement.from_terms(cfg, chart, cfg.series(vals), zc)


def _norm_law_samples(sc: Scenario, ext: KummerExtension, rng, count: int) -> dict:
    ring = frozenset(sc.cfg.indices) - {sc.i}
    Q = ext.degree
    failures = []
    r_pows = [AnalyticElement.one(sc.cfg, sc.j, sc.cfg.precision)]
    for _ in range(2):
        r_pows.append(r_pows[-1] * sc.r)
    for case in range(count):
        coords = [
            random_ring_element(sc.cfg, rng, ring, sc.j)
            for _ in range(Q)
        ]
        x = ext.element(coords)
        w = rng.choice([0, 1, 2])
        xw = x.mul_base(r_pows[w]) if w else x
        try:
            v0 = x.valuation(sc.pt_r)
            vw = xw.valuation(sc.pt_r)
            if vw != v0 + w:
                failures.append({"case": case, "check": "power shift", "got": vw, "want": v0 + w})
            for l in range(1, Q):
                vl = xw.galois(l).valuation(sc.pt_r)
                if vl != vw:
                    failures.append({"case": case, "check": f"galois^{l}", "got": vl, "want": vw})
            nx = xw.norm()
            vn = prime_point_valuation(nx.elem, sc.pt_r)
            if vn != Q * vw:
                failures.append({"case": case, "check": "norm law", "got": vn, "want": Q * vw})
        except ValueError as exc:
            failures.append({"case": case, "check": "evaluation", "error": str(exc)})
    return {"samples": count, "failures": failures}


# ---------------------------------------------------------------------------
# the composite-extension grid (only what the norm identity needs)
# ---------------------------------------------------------------------------


class BiRadicalGrid:
    """The algebra base[U, V]/(U^q - a, V^q' - b) on the q x q' basis grid.

    Only enough structure to state the norm identity: the q'-th power of the
    second generator lands back in the base and equals b, and likewise
    U^q = a.  Coordinates reuse the u2-localized presentation.
    """

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.q = sc.q
        self.qp = sc.qprime
        self.rad_u = _Coord(sc.rp.rebase(sc.j), 1)   # a as r'/u2
        self.rad_v = _Coord(sc.r, 1)                 # b as r/u2
        self.zero = _Coord(AnalyticElement.zero(sc.cfg, sc.j, sc.cfg.precision))
        self.one = _Coord(AnalyticElement.one(sc.cfg, sc.j, sc.cfg.precision))

    def element(self, entries: dict) -> dict:
        out = {(u, v): self.zero for u in range(self.q) for v in range(self.qp)}
        for key, val in entries.items():
            out[key] = val if isinstance(val, _Coord) else _Coord(val)
        return out

    def _coord_mul(self, c1: _Coord, c2: _Coord) -> _Coord:
        return _Coord(c1.elem * c2.elem, c1.u2pow + c2.u2pow)

    def _coord_add(self, c1: _Coord, c2: _Coord) -> _Coord:
        if c1.is_zero():
            return c2
        if c2.is_zero():
            return c1
        p = max(c1.u2pow, c2.u2pow)
        e1, e2 = c1.elem, c2.elem
        for _ in range(p - c1.u2pow):
            e1 = e1 * LocalizedElement.of(self.sc.u2)
        for _ in range(p - c2.u2pow):
            e2 = e2 * LocalizedElement.of(self.sc.u2)
        return _Coord(e1 + e2, p)

    def mul(self, x: dict, y: dict) -> dict:
        out = {(u, v): self.zero for u in range(self.q) for v in range(self.qp)}
        for (u1, v1), c1 in x.items():
            if c1.is_zero():
                continue
            for (u2, v2), c2 in y.items():
                if c2.is_zero():
                    continue
                u, v = u1 + u2, v1 + v2
                c = self._coord_mul(c1, c2)
                if u >= self.q:
                    u -= self.q
                    c = self._coord_mul(c, self.rad_u)
                if v >= self.qp:
                    v -= self.qp
                    c = self._coord_mul(c, self.rad_v)
                out[(u, v)] = self._coord_add(out[(u, v)], c)
        return out

    def power(self, x: dict, e: int) -> dict:
        out = self.element({(0, 0): self.one})
        for _ in range(e):
            out = self.mul(out, x)
        return out

    def coords_equal(self, c1: _Coord, c2: _Coord) -> bool:
        e1, e2 = c1.elem, c2.elem
        for _ in range(max(0, c2.u2pow - c1.u2pow)):
            e1 = e1 * LocalizedElement.of(self.sc.u2)
        for _ in range(max(0, c1.u2pow - c2.u2pow)):
            e2 = e2 * LocalizedElement.of(self.sc.u2)
        return e1.equals(e2)

    def is_base_constant(self, x: dict, value: _Coord) -> bool:
        for key, c in x.items():
            if key == (0, 0):
                if not self.coords_equal(c, value):
                    return False
            elif not c.is_zero():
                return False
        return True


def grid_norm_identity(sc: Scenario) -> dict:
    """The composite-grid checks behind "b is a norm from the tower".

    s' (the second radical generator) has s'^{q'} = b, which is exactly its
    norm from the top of the tower down to the grid base since the Galois
    action fixes it there; same for the first generator and a.
    """
    grid = BiRadicalGrid(sc)
    s_prime = grid.element({(0, 1): grid.one})
    s_gen = grid.element({(1, 0): grid.one})
    got_b = grid.power(s_prime, sc.qprime)
    got_a = grid.power(s_gen, sc.q)
    return {
        "s_prime_power_is_b": grid.is_base_constant(got_b, grid.rad_v),
        "s_power_is_a": grid.is_base_constant(got_a, grid.rad_u),
    }


# ---------------------------------------------------------------------------
# quaternions (the q = q' = 2 symbol algebra, sanity layer)
# ---------------------------------------------------------------------------


def quaternion_mul(x: Sequence, y: Sequence, a, b) -> tuple:
    """Product in the quaternion algebra with i^2 = a, j^2 = b, ji = -ij.

    Coordinates are over any commutative ring with +, *, unary -; the
    basis is (1, i, j, ij).
    """
    if len(x) != 4 or len(y) != 4:
        raise ValueError("quaternions have four coordinates")
    x0, x1, x2, x3 = x
    y0, y1, y2, y3 = y
    ab = a * b
    return (
        x0 * y0 + a * (x1 * y1) + b * (x2 * y2) - ab * (x3 * y3),
        x0 * y1 + x1 * y0 - b * (x2 * y3) + b * (x3 * y2),
        x0 * y2 + x2 * y0 + a * (x1 * y3) - a * (x3 * y1),
        x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
    )


def quaternion_conj(x: Sequence) -> tuple:
    x0, x1, x2, x3 = x
    return (x0, -x1, -x2, -x3)


def quaternion_norm(x: Sequence, a, b):
    """Reduced norm x0^2 - a x1^2 - b x2^2 + ab x3^2."""
    x0, x1, x2, x3 = x
    return x0 * x0 - a * (x1 * x1) - b * (x2 * x2) + (a * b) * (x3 * x3)
