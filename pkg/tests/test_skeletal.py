import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import hopf
from morita_ssum.repcat import RepCategory
from morita_ssum.skeletal import (
    InputError,
    builtin,
    extract_skeletal,
    frobenius_schur,
    load_skeletal,
    pentagon_residual,
    skeletal_from_json,
    skeletal_to_json,
    symmetrized_6j,
    validate_skeletal,
)
from morita_ssum.statesum import fixtures_dir

NAMES = ["vec_z2", "vec_z3", "vec_s3", "rep_s3", "fibonacci", "ising"]


@pytest.mark.parametrize("name", NAMES)
def test_builtins_validate(name):
    rep = validate_skeletal(builtin(name))
    assert rep.passed, rep.as_dict()
    assert pentagon_residual(builtin(name)) < 1e-12


@pytest.mark.parametrize("name,Dsq", [
    ("fibonacci", (5 + math.sqrt(5)) / 2), ("vec_s3", 6), ("ising", 4), ("rep_s3", 6), ("vec_z3", 3),
])
def test_global_dimensions(name, Dsq):
    assert abs(builtin(name).Dsq - Dsq) < 1e-12


def test_corrupted_fixture_fails_pentagon():
    data = load_skeletal(fixtures_dir() / "corrupted.json")
    rep = validate_skeletal(data)
    assert not rep.passed
    assert "pentagon" in rep.failed
    assert pentagon_residual(data) > 0.5


def test_fixture_files_match_builtins():
    for fname, name in (("fib.json", "fibonacci"), ("ising.json", "ising"), ("vec_s3.json", "vec_s3")):
        a = load_skeletal(fixtures_dir() / fname)
        b = builtin(name)
        assert a.labels == b.labels
        assert max(abs(a.F[k] - b.F[k]) for k in b.F) < 1e-15


def test_pointed_6j_have_unit_modulus():
    six = symmetrized_6j(builtin("vec_s3"))
    assert all(abs(abs(v) - 1) < 1e-12 for v in six.table.values())
    assert six.symmetry_residual == 0


def test_fibonacci_6j_and_frobenius_schur():
    data = builtin("fibonacci")
    six = symmetrized_6j(data)
    assert six.symmetry_residual < 1e-12
    assert six.pseudo_real == []
    assert abs(frobenius_schur(data, "t") - 1) < 1e-12


def test_ising_sigma_has_positive_indicator():
    data = builtin("ising")
    fs = frobenius_schur(data, "s")
    assert abs(fs - 1) < 1e-12
    assert symmetrized_6j(data).pseudo_real == []


def test_extraction_from_rep_s3():
    cat = RepCategory(hopf("k[S3]", exact=False))
    data = extract_skeletal(cat, name="rep_s3")
    assert sorted(data.dims.values()) == pytest.approx([1, 1, 2])
    assert validate_skeletal(data).passed
    assert symmetrized_6j(data).symmetry_residual < 1e-9
    # fusion rules of the standard rep: X2 x X2 = 1 + X1 + X2
    x2 = next(a for a in data.labels if data.dims[a] == pytest.approx(2))
    assert sorted(m for _, m in data.fuse(x2, x2)) == [1, 1, 1]


def test_extraction_of_function_algebra_is_pointed():
    cat = RepCategory(hopf("F(S3)", exact=False))
    data = extract_skeletal(cat)
    assert len(data.labels) == 6 and all(abs(d - 1) < 1e-12 for d in data.dims.values())
    assert validate_skeletal(data).passed
    six = symmetrized_6j(data)
    assert all(abs(abs(v) - 1) < 1e-9 for v in six.table.values())


@pytest.mark.parametrize("name", NAMES)
def test_json_roundtrip(name):
    data = builtin(name)
    back = skeletal_from_json(json.loads(json.dumps(skeletal_to_json(data))))
    assert back.labels == data.labels and back.N == data.N
    assert max(abs(back.F[k] - v) for k, v in data.F.items()) < 1e-15


def test_missing_entry_is_reported():
    obj = skeletal_to_json(builtin("fibonacci"))
    obj["F"] = obj["F"][1:]
    with pytest.raises(InputError, match="missing"):
        validate_skeletal(skeletal_from_json(obj))


def test_malformed_input():
    with pytest.raises(InputError):
        skeletal_from_json({"labels": ["1"]})
    with pytest.raises(InputError):
        builtin("nope")


def test_context_skeletal_has_four_corners(ctx_z2):
    from morita_ssum.skeletal import context_skeletal
    data = context_skeletal(ctx_z2)
    assert data.colors() == ["A", "B"]
    assert validate_skeletal(data).passed
    assert abs(data.dsq("A") - 2) < 1e-9 and abs(data.dsq("B") - 2) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["fibonacci", "ising", "rep_s3"]), st.data(), st.floats(0.01, 0.5))
def test_perturbing_a_nonunit_entry_is_caught(name, pick, eps):
    data = builtin(name)
    keys = sorted((k for k in data.F if data.unit not in k[:6]), key=str)
    key = pick.draw(st.sampled_from(keys))
    bad = skeletal_from_json(skeletal_to_json(data))
    bad.F[key] *= 1 + eps
    assert pentagon_residual(bad) > 1e-6


def test_inverse_associator_is_inverse():
    data = builtin("ising")
    for a, b, c, d in data.quadruples():
        lk, rk, m = data.block(a, b, c, d)
        inv = np.array([[data.Finv[(a, b, c, d, e, f, mu, nu, rho, sig)]
                         for (f, rho, sig) in rk] for (e, mu, nu) in lk])
        assert np.allclose(inv @ m, np.eye(len(lk)))
