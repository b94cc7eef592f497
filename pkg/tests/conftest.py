import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from morita_ssum import frobenius as fr  # noqa: E402
from morita_ssum import hopf as hp  # noqa: E402
from morita_ssum import morita as mo  # noqa: E402
from morita_ssum.numerics import COMPLEX_FIELD, EXACT_FIELD  # noqa: E402

_CACHE = {}


def hopf(spec, exact=True):
    key = ("H", spec, exact)
    if key not in _CACHE:
        _CACHE[key] = hp.named_hopf(spec, EXACT_FIELD if exact else COMPLEX_FIELD)
    return _CACHE[key]


def regular(spec, exact=True):
    key = ("F", spec, exact)
    if key not in _CACHE:
        H = hopf(spec, exact)
        _CACHE[key] = fr.regular_from_hopf(H, hp.find_integrals(H))
    return _CACHE[key]


def context(spec, exact=False):
    key = ("ctx", spec, exact)
    if key not in _CACHE:
        _CACHE[key] = mo.build_context(regular(spec, exact), name=spec)
    return _CACHE[key]


def reconstruction(spec, exact=False):
    key = ("R", spec, exact)
    if key not in _CACHE:
        _CACHE[key] = mo.reconstruct_hopf(context(spec, exact))
    return _CACHE[key]


@pytest.fixture(scope="session")
def ctx_z2():
    return context("F(Z2)")


@pytest.fixture(scope="session")
def ctx_s3():
    return context("F(S3)")
