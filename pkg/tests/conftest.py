from __future__ import annotations

import math

import numpy as np
import pytest

from nctoeplitz import (
    PHASE,
    DeformationParams,
    DegenerateParams,
    PhasePoint,
    PolySymbol,
)

QUADRATIC_EXPONENTS = [
    (0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
    (2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2),
    (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1),
    (0, 0, 1, 1),
]


def random_phase_symbol(rng, degree=3, nterms=8, real=False):
    exps = [e for e in _exponents_up_to(degree)]
    chosen = rng.choice(len(exps), size=min(nterms, len(exps)), replace=False)
    terms = {}
    for k in chosen:
        c = rng.uniform(-2.0, 2.0)
        if not real:
            c = complex(c, rng.uniform(-2.0, 2.0))
        terms[exps[int(k)]] = c
    return PolySymbol(PHASE, terms)


def random_quadratic(rng, real=False):
    terms = {}
    for e in QUADRATIC_EXPONENTS:
        c = rng.uniform(-2.0, 2.0)
        if not real:
            c = complex(c, rng.uniform(-2.0, 2.0))
        terms[e] = c
    return PolySymbol(PHASE, terms)


def _exponents_up_to(degree):
    out = []
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            for c in range(degree + 1 - a - b):
                for d in range(degree + 1 - a - b - c):
                    out.append((a, b, c, d))
    return out


def random_generic_params(rng, b_max=0.5, t_max=0.5):
    hbar = rng.uniform(0.5, 2.0)
    B = rng.uniform(-b_max, b_max)
    T = rng.uniform(-t_max, t_max)
    S = rng.uniform(0.8, 1.25)
    return DeformationParams(hbar, T * hbar, B * hbar, S * math.sqrt(hbar))


def random_degenerate_params(rng):
    hbar = rng.uniform(0.5, 2.0)
    theta = float(rng.choice([-1.0, 1.0])) * rng.uniform(0.3, 1.5)
    return DegenerateParams(
        hbar, theta,
        kappa=rng.uniform(-1.0, 1.0),
        delta=rng.uniform(-1.0, 1.0),
        s=rng.uniform(0.8, 1.25) * math.sqrt(hbar),
        base_point=(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)))


def random_point(rng, scale=1.0):
    return PhasePoint(*(scale * rng.uniform(-1.0, 1.0, 4)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
