import math

import numpy as np
import pytest

from wienerwidths import (
    ConstantSpec,
    Embedding,
    Family,
    ResourceLimitError,
    WeightSpec,
    WidthKind,
    aux_integral,
    constant,
    convergence_table,
    series_S,
    sigma_prefix,
)


def test_constant_examples():
    assert constant(ConstantSpec("mix-l2-sigma", s=1.0, d=2)) == 4.0
    assert constant(ConstantSpec("mix-l2-sigma", s=2.0, d=3)) == 16.0
    np.testing.assert_allclose(constant(ConstantSpec("transfer-vw", s=2.0)),
                               math.sqrt(5.0), rtol=0)
    np.testing.assert_allclose(constant(ConstantSpec("transfer-uv", s=1.0)),
                               2.0 / 3.0, rtol=1e-15)
    assert constant(ConstantSpec("preasymptotic", d=3)) == 6.25
    assert constant(ConstantSpec("h1-constant", s=2.0, d=1)) == 2.0


def test_constant_power_identity():
    for d in (1, 2, 3, 5):
        base = constant(ConstantSpec("mix-l2-sigma", s=1.0, d=d))
        for s in (0.5, 1.5, 2.0, 3.0):
            assert constant(ConstantSpec("mix-l2-sigma", s=s, d=d)) == base ** s


def test_preasymptotic_d4():
    expect = (1.0 + (1.0 + 2.0 / math.log2(3.0)) / 3.0) ** 3
    np.testing.assert_allclose(constant(ConstantSpec("preasymptotic", d=4)),
                               expect, rtol=1e-15)


def test_h1_constant_uses_series():
    S = series_S(2.0, 1e-10)
    np.testing.assert_allclose(constant(ConstantSpec("h1-constant", s=2.0, d=2)),
                               4.0 * (2.0 * S + 1.0), rtol=1e-12)
    # d=1 skips the series entirely, so it works even where the series
    # would be expensive
    assert constant(ConstantSpec("h1-constant", s=4.0, d=1)) == 8.0


def test_s_series_constant_name():
    assert constant(ConstantSpec("s-series", s=2.0)) == series_S(2.0, 1e-10)


def test_constant_domain_errors():
    with pytest.raises(ValueError, match="d >= 3"):
        constant(ConstantSpec("preasymptotic", d=2))
    with pytest.raises(ValueError, match="s > 1"):
        constant(ConstantSpec("h1-constant", s=1.0, d=2))
    with pytest.raises(ValueError, match="required"):
        constant(ConstantSpec("transfer-uv"))
    with pytest.raises(ValueError, match="unknown constant"):
        ConstantSpec("no-such-thing")


def test_series_s2_closed_form():
    closed = (math.pi / math.tanh(math.pi) - 1.0) / 2.0
    assert abs(series_S(2.0, 1e-10) - closed) < 1e-10
    assert abs(series_S(2.0, 1e-6) - closed) < 1e-6


def test_series_s3_brute_force():
    p = 0.75  # 3/(2*(3-1))
    k = np.arange(1, 10 ** 7 + 1, dtype=np.float64)
    partial = float(np.sum((k * k + 1.0) ** (-p)))
    a = 2 * p - 1
    hi = (10 ** 7) ** (-a) / a
    lo = (10 ** 7 + 2.0) ** (-a) / a
    oracle = partial + (hi + lo) / 2.0
    assert abs(series_S(3.0, 1e-8) - oracle) < 1e-8


def test_series_monotone_in_exponent():
    # p = s/(2(s-1)) falls as s rises, so the sum rises
    vals = [series_S(s, 1e-10) for s in (1.2, 1.5, 2.0, 3.0)]
    assert vals == sorted(vals)


def test_series_stability_small_s():
    v1 = series_S(1.1, 1e-10)
    v2 = series_S(1.1, 1e-13)
    assert abs(v1 - v2) < 2e-10


def test_series_domain_and_resource():
    with pytest.raises(ValueError):
        series_S(1.0)
    with pytest.raises(ValueError):
        series_S(2.0, 0.0)
    with pytest.raises(ResourceLimitError):
        series_S(4.0, 1e-14)


def test_convergence_table_mixed_inf_d1():
    spec = WeightSpec(Family.MIXED_INF, s=1.0, d=1)
    p = sigma_prefix(spec, 10 ** 5 + 1)
    t = convergence_table(p, Embedding.A_TO_A, WidthKind.APPROXIMATION,
                          [10 ** 3, 10 ** 4, 10 ** 5], alpha=1.0, beta=0.0,
                          target=2.0)
    assert [r.n for r in t.rows] == [10 ** 3, 10 ** 4, 10 ** 5]
    for row in t.rows:
        assert 2.0 - 1e-12 <= row.ratio <= 2.0 + 3.0 / row.n
        np.testing.assert_allclose(row.ratio, row.raw / row.normalizer, rtol=1e-12)
        assert row.target == 2.0


def test_convergence_table_h1_d1():
    spec = WeightSpec(Family.H1_RATIO, s=2.0, d=1)
    p = sigma_prefix(spec, 10 ** 5)
    t = convergence_table(p, Embedding.HMIX_TO_H1, WidthKind.APPROXIMATION,
                          [10 ** 5], alpha=1.0, beta=0.0, target=2.0)
    assert abs(t.rows[0].ratio - 2.0) < 0.001 * 2.0


def test_convergence_table_threads_deterministic():
    spec = WeightSpec(Family.MIXED_SR, s=1.5, d=2, r=2.0)
    p = sigma_prefix(spec, 3000)
    grid = [10, 30, 100, 300, 700]
    t1 = convergence_table(p, Embedding.A_TO_A, WidthKind.KOLMOGOROV, grid,
                           alpha=1.5, beta=1.5, target=1.0, threads=1)
    t4 = convergence_table(p, Embedding.A_TO_A, WidthKind.KOLMOGOROV, grid,
                           alpha=1.5, beta=1.5, target=1.0, threads=4)
    assert [(r.n, r.raw, r.ratio) for r in t1.rows] == \
           [(r.n, r.raw, r.ratio) for r in t4.rows]


def test_convergence_table_validation():
    spec = WeightSpec(Family.MIXED_INF, s=1.0, d=1)
    p = sigma_prefix(spec, 100)
    with pytest.raises(ValueError, match="increasing"):
        convergence_table(p, Embedding.A_TO_A, WidthKind.APPROXIMATION,
                          [10, 10], alpha=1.0, beta=0.0, target=1.0)
    with pytest.raises(ValueError, match=">= 3"):
        convergence_table(p, Embedding.A_TO_A, WidthKind.APPROXIMATION,
                          [2, 10], alpha=1.0, beta=0.0, target=1.0)
    with pytest.raises(ValueError, match="exact"):
        convergence_table(p, Embedding.A_TO_LINF, WidthKind.APPROXIMATION,
                          [10, 20], alpha=1.0, beta=0.0, target=1.0)


def test_aux_integral_beta0_closed_form():
    for s in (0.5, 1.0, 2.0):
        for n in (10, 1000):
            got = aux_integral(s, 0.0, 2.0, n)
            x = 2.0 / n
            expect = (1.0 - x ** (s + 1.0)) / (s + 1.0)
            np.testing.assert_allclose(got, expect, rtol=0, atol=1e-12)


def test_aux_integral_limit():
    v = aux_integral(1.0, 1.0, 2.0, 10 ** 6)
    assert abs(v - 0.5) < 0.02 + 0.002  # near the lemma limit already at 1e6
    devs = [abs(aux_integral(2.0, 2.0, 2.0, n) - 1.0 / 3.0)
            for n in (10 ** 4, 10 ** 6, 10 ** 8)]
    assert devs[0] > devs[1] > devs[2]


def test_aux_integral_domain():
    with pytest.raises(ValueError, match="a > 1"):
        aux_integral(1.0, 1.0, 1.0, 100)
    with pytest.raises(ValueError, match="n > a"):
        aux_integral(1.0, 1.0, 2.0, 2)
