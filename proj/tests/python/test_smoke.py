import math
from fractions import Fraction
from pathlib import Path

import pytest

import hardcore_lab as hl

CORPUS = Path(__file__).resolve().parents[2] / "data" / "graphs"


def test_density_relation():
    assert hl.lambda_of_alpha(3, 0.2) == pytest.approx(16 / 27, rel=1e-15)
    assert hl.alpha_of_lambda(3, 16 / 27) == pytest.approx(0.2, abs=1e-12)
    k = hl.kernel(3, 0.2)
    assert k["p01"] == pytest.approx(0.25)
    assert k["p00"] == pytest.approx(0.75)


def test_exact_moments():
    assert hl.first_moment_exact(4, 1, 1, 3) == Fraction(32, 11)
    assert hl.second_moment_exact(4, 1, 1, 3) == Fraction(104, 11)
    assert math.exp(hl.first_moment_log(4, 1, 1.0, 3)) == pytest.approx(32 / 11)


def test_moment_functions():
    assert hl.phi(0.25, 1.0, 3) == pytest.approx(0.434911, abs=1e-6)
    assert hl.eps_bar(0.2, 0.05) == pytest.approx(0.114589, abs=1e-6)
    a = 0.17
    assert hl.f(a, a * a, a * (1 - 2 * a), 2.0, 9) == pytest.approx(2 * hl.phi(a, 2.0, 9), abs=1e-12)


def test_tree_reconstruction():
    p0, p1, _ = hl.posterior_root([0, 0, 0], 3, 1.0)
    assert p0 == pytest.approx(0.5)
    exact = hl.xbar(3, 2.0, 3)
    mc = hl.xbar(3, 2.0, 3, samples=50_000, seed=4)
    assert abs(mc["xbar"] - exact["xbar"]) < 4 * mc["stderr"]
    assert hl.depth3(16)["passes"]


def test_gibbs():
    z, marg = hl.partition_function(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 1.0)
    assert z == 7.0
    est = hl.glauber_marginals(4, [(0, 1), (1, 2), (2, 3), (3, 0)], 1.0, 200_000, seed=2)
    assert max(abs(a - b) for a, b in zip(est, marg)) < 0.01


def test_pairing_is_involution():
    p = hl.sample_pairing(10, 3, seed=5)
    assert all(p[p[i]] == i and p[i] != i for i in range(len(p)))


def test_errors_are_typed():
    with pytest.raises(hl.DomainError):
        hl.lambda_of_alpha(3, 0.7)
    with pytest.raises(hl.HardcoreError):
        hl.sample_pairing(3, 3)


def test_oracle_and_lwc():
    files = sorted(str(p) for p in CORPUS.glob("*.graph"))
    report = hl.oracle(corpus=files)
    assert report["all_passed"]
    r = hl.lwc(256, seed=3)
    assert r["aggregate_tv"] <= r["max_tv"] + 1e-15
