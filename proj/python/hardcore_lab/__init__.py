"""Python access to the hardcore-model library."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    ArgumentError,
    DomainError,
    HardcoreError,
    ResourceError,
    ShapeError,
    alpha_of_lambda,
    alpha_star,
    eps_bar,
    f,
    first_moment_log,
    glauber_marginals,
    kernel,
    lambda_of_alpha,
    partition_function,
    phi,
    posterior_root,
    sample_pairing,
)

__version__ = _core.__version__


def _frac(pair):
    return Fraction(int(pair[0]), int(pair[1]))


def _lam(lam):
    q = Fraction(lam)
    return (q.numerator, q.denominator)


def first_moment_exact(n, s, lam, d):
    """E[Z] restricted to independent sets of size s, as a Fraction."""
    return _frac(_core.first_moment_rational(n, s, _lam(lam), d))


def second_moment_exact(n, s, lam, d):
    return _frac(_core.second_moment_sum_rational(n, s, _lam(lam), d))


def thresholds(d, alpha=None, c=3.01):
    return json.loads(_core.thresholds_json(d, alpha, c))


def max_report(lam, d, resolution=1e-3):
    return json.loads(_core.max_report_json(lam, d, resolution))


def xbar(d, lam, depth, samples=None, seed=1):
    if samples is None:
        return json.loads(_core.xbar_exact(d, lam, depth))
    return json.loads(_core.xbar_mc(d, lam, depth, samples, seed))


def depth3(d, beta=1.2):
    return json.loads(_core.depth3_json(d, beta))


def lwc(n, d=3, lam=1.0, r=1, seed=1):
    return json.loads(_core.lwc_json(n, d, lam, r, seed))


def oracle(seed=1, corpus=()):
    return json.loads(_core.oracle_json(seed, list(corpus)))
