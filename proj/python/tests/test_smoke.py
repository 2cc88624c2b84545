import json
import math
from fractions import Fraction

import pytest

import fracsum


def tau(n):
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def test_sums_match_direct_definition():
    expected = sum(tau(1000 // n) for n in range(1, 1001))
    assert fracsum.blocked_sum("tau", 1000) == Fraction(expected)
    assert fracsum.naive_sum("tau", 1000) == Fraction(expected)
    s = fracsum.blocked_sum("phi_over_n", 5000)
    assert isinstance(s, Fraction)
    assert s == fracsum.naive_sum("phi_over_n", 5000)
    assert isinstance(fracsum.blocked_sum("lambda", 1000), float)
    assert fracsum.blocked_sum("sigma_beta_norm", 300, beta=Fraction(1, 3)) == pytest.approx(
        fracsum.naive_sum("sigma_beta_norm", 300, beta="1/3"), rel=1e-12)


def test_decompose_is_exact():
    r = fracsum.decompose("tau", 12, B=3)
    assert r["M"] == Fraction(69, 5)
    assert r["S"] == 25
    assert r["residual"] == 0
    assert fracsum.decompose("kfree", 10_000, B=21, k=3)["residual"] == 0


def test_constants():
    value, bound = fracsum.compute_cf("one", 1e-12)
    assert value == 1.0
    c_tau, bound = fracsum.compute_cf("tau", 1e-8)
    assert bound <= 1e-8
    N = 100_000
    counts = [0] * (N + 1)
    for d in range(1, N + 1):
        for m in range(d, N + 1, d):
            counts[m] += 1
    direct = math.fsum(counts[n] / (n * (n + 1)) for n in range(1, N + 1))
    assert abs(c_tau - direct) < 2e-4  # tail ~ log(N)/N


def test_exponent_pairs():
    assert fracsum.lemma4_pair(0) == (Fraction(1, 2), Fraction(1, 2))
    assert fracsum.lemma4_pair(2) == (Fraction(1, 14), Fraction(11, 14))
    for n in range(10):
        assert fracsum.theta_ratio(n) == 1 - Fraction(n + 2, 2 ** (n + 2) - 1)
    assert fracsum.theorem2_exponent(0) == Fraction(1, 3)
    assert fracsum.theorem2_exponent("1/2") == Fraction(3, 5)
    assert fracsum.theorem2_exponent(Fraction(1, 3)) == Fraction(1, 2)
    assert fracsum.interval_index("11/20") == 1


def test_exponential_sums():
    z = fracsum.exp_sum_tau(100, 1, 2)
    assert abs(z) == pytest.approx(math.sqrt(7), rel=1e-12)
    assert fracsum.jutila_check(10**6, 1, 1000)["admissible"]
    assert not fracsum.jutila_check(10**6, 40_000, 1000)["admissible"]


def test_fit_returns_catalog_exponent():
    r = fracsum.fit("phi_over_n", 1000, 100_000, points=10)
    assert len(r["x"]) == 10
    assert r["exponent"] == Fraction(1, 3)
    assert math.isfinite(r["slope"])


def test_errors():
    assert fracsum.blocked_sum("id", 100) == fracsum.naive_sum("id", 100)
    with pytest.raises(fracsum.FracError, match="divergence"):
        fracsum.compute_cf("id")
    with pytest.raises(fracsum.FracError, match="resource"):
        fracsum.blocked_sum("tau", 2 * 10**9)
    with pytest.raises(ValueError):
        fracsum.jutila_check(10**6, 0, 1000)
    with pytest.raises(TypeError):
        fracsum.theorem2_exponent(0.5)


def test_cli_in_process():
    code, out, err = fracsum.cli(["pairs", "--n", "3", "--format", "csv"])
    assert code == 0
    assert len(out.strip().splitlines()) == 5
    code, out, _ = fracsum.cli(["sum", "--f", "tau", "--x", "1000"])
    assert code == 0
    assert json.loads(out)["result"]["S"] == str(sum(tau(1000 // n) for n in range(1, 1001)))
    code, _, err = fracsum.cli(["sum", "--f", "id", "--x", "100"])
    assert code == 1
    assert "alpha < 1" in err
