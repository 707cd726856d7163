import math

import numpy as np
import pytest

from fermi_charts import make_catalog_entry

# name -> (kind, params); the spacetimes used across the suite
SPACETIMES = {
    "dS": ("de_sitter", {"lambda": 3.0}),
    "AdS": ("anti_de_sitter", {"lambda": -3.0}),
    "ES": ("einstein_static", {"R": 1.0}),
    "IS0": ("interior_schwarzschild", {"M": 0.25, "R": 1.0, "lambda": 0.0}),
    "IS+": ("interior_schwarzschild", {"M": 0.25, "R": 1.0, "lambda": 0.1}),
    "IS-": ("interior_schwarzschild", {"M": 0.25, "R": 1.0, "lambda": -0.1}),
}


@pytest.fixture(params=sorted(SPACETIMES))
def entry(request):
    kind, params = SPACETIMES[request.param]
    return make_catalog_entry(kind, params)


@pytest.fixture
def de_sitter():
    return make_catalog_entry("de_sitter", {"lambda": 3.0})


@pytest.fixture
def anti_de_sitter():
    return make_catalog_entry("anti_de_sitter", {"lambda": -3.0})


@pytest.fixture
def einstein():
    return make_catalog_entry("einstein_static", {"R": 1.0})


@pytest.fixture
def interior():
    return make_catalog_entry("interior_schwarzschild", {"M": 0.25, "R": 1.0, "lambda": 0.0})


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


HALF_PI = math.pi / 2
