import random

import pytest

from patchalg.analytic import default_configuration, embed_xy, random_element
from patchalg.oracle import (
    OracleCache,
    OracleError,
    const,
    lin_indep_check,
    oracle_expand,
    oracle_of_element,
    source_of,
    xvar,
    yvar,
    zvar,
)
from patchalg.scalars import QQ, Scalar

CFG = default_configuration()


def test_geometric_base_case():
    # z_1 at the chart with center 0: z + z^2 + z^3 + ...
    s = oracle_expand(zvar(1), CFG, 0, 6)
    for m in range(1, 6):
        assert s.coeff(m, 0) == Scalar.of(QQ, 1)
    assert s.coeff(0, 0).is_zero()


def test_rational_identity():
    e = (const(1) + zvar(1)) * (const(1) - zvar(0))
    s = oracle_expand(e, CFG, 0, 8)
    assert s == oracle_expand(const(1), CFG, 0, 8)


def test_xy_commutes_with_canonical_mul():
    X = embed_xy(CFG, {(1, 0): 1}, 0)
    Y = embed_xy(CFG, {(0, 1): 1}, 0)
    lhs = oracle_expand(xvar() * yvar(), CFG, 0, 8)
    rhs = oracle_expand(source_of(X * Y), CFG, 0, 8)
    assert lhs == rhs


def test_division_by_uniformizer():
    e = yvar() / (xvar() - const(1) * yvar())
    assert oracle_expand(e, CFG, 0, 8) == oracle_expand(zvar(1), CFG, 0, 8)


def test_unexpandable_denominator():
    with pytest.raises(OracleError):
        oracle_expand(const(1) / zvar(0), CFG, 0, 6)


def test_cached_expansion_agrees_with_tree_walk():
    rng = random.Random(21)
    cache = OracleCache(CFG, 7)
    for _ in range(5):
        f = random_element(CFG, rng, max_zdeg=2)
        for chart in CFG.indices:
            assert oracle_of_element(f, chart, cache) == oracle_expand(
                source_of(f), CFG, chart, 7
            )


def test_mul_add_rebase_commute():
    rng = random.Random(22)
    cache = OracleCache(CFG, 9)
    for _ in range(10):
        f = random_element(CFG, rng)
        g = random_element(CFG, rng)
        of = oracle_of_element(f, f.chart, cache)
        og = oracle_of_element(g, f.chart, cache)
        assert of * og == oracle_of_element(f * g, f.chart, cache)
        assert of + og == oracle_of_element(f + g.rebase(f.chart), f.chart, cache)
        j2 = (f.chart + 1) % 3
        assert oracle_of_element(f, j2, cache) == oracle_of_element(f.rebase(j2), j2, cache)


def test_lin_indep_examples():
    assert lin_indep_check(CFG, {None: 0})
    assert not lin_indep_check(CFG, {None: 1})
    assert not lin_indep_check(CFG, {None: 2, (0, 1): 3, (1, 2): -1, (2, 4): 5})
    assert lin_indep_check(CFG, {None: 0, (0, 1): 0})


def test_lin_indep_random_nonzero():
    rng = random.Random(23)
    for _ in range(20):
        combo = {}
        nonzero = False
        for k in CFG.indices:
            for n in range(1, 5):
                if rng.random() < 0.4:
                    c = rng.randint(-9, 9)
                    combo[(k, n)] = c
                    nonzero = nonzero or c != 0
        combo[None] = rng.randint(-9, 9)
        nonzero = nonzero or combo[None] != 0
        assert lin_indep_check(CFG, combo) == (not nonzero)
