from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import hopf
from morita_ssum.hopf import (
    check_group,
    classical_frobenius_from_form,
    dimension_invariant,
    dual_hopf,
    find_integrals,
    fourier_map,
    group_hopf,
    hopf_from_json,
    hopf_to_json,
    integral_space,
    matrix_algebra,
    named_hopf,
    semisimplicity_test,
    strong_left_invariance_residual,
    strong_separability_test,
    tilde_form_residual,
    tilde_module_residual,
    tilde_multiplication,
    truncated_polynomial_algebra,
    validate_hopf,
)
from morita_ssum.numerics import COMPLEX_FIELD, EXACT_FIELD, residual

FIVE = ["F(Z2)", "F(Z3)", "F(S3)", "k[Z2]", "k[S3]"]
GROUPS = ["Z2", "Z3", "Z4", "Z2xZ2", "S3", "D4", "Q8"]


def test_function_algebra_z2_coproduct():
    H = hopf("F(Z2)")
    # Delta(delta_e) = delta_e x delta_e + delta_g x delta_g
    d = H.coproduct(H.basis(0))
    assert d.tolist() == [[1, 0], [0, 1]]


def test_group_algebra_s3_cocommutative():
    H = hopf("k[S3]")
    assert H.n == 6
    assert residual(H.delta, np.transpose(H.delta, (0, 2, 1))) == 0


@pytest.mark.parametrize("spec", FIVE)
def test_validate_exact_zero(spec):
    rep = validate_hopf(hopf(spec))
    assert rep.passed
    assert all(c.residual == 0 for c in rep.checks)


def test_antipode_squared_z3():
    H = hopf("F(Z3)")
    assert residual(H.antipode @ H.antipode, EXACT_FIELD.eye(3)) == 0


def test_corrupted_multiplication_named():
    H = named_hopf("F(S3)")
    H.m[0, 1, 2] = Fraction(1)  # delta_0 delta_1 = delta_2 breaks associativity
    rep = validate_hopf(H)
    assert not rep.passed
    assert "associativity" in rep.failed


def test_group_algebra_z3_floating():
    rep = validate_hopf(hopf("k[Z3]", exact=False))
    assert rep.passed
    assert max(c.residual for c in rep.checks) < 1e-12


def test_bad_group_tables():
    with pytest.raises(ValueError):
        check_group([[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        check_group([[0] * 30 for _ in range(30)])


def test_dual_examples():
    Fz2 = hopf("F(Z2)")
    kz2 = hopf("k[Z2]")
    D = dual_hopf(Fz2)
    for attr in ("m", "unit", "delta", "counit", "antipode"):
        assert residual(getattr(D, attr), getattr(kz2, attr)) == 0
    Fs3 = hopf("F(S3)")
    DD = dual_hopf(dual_hopf(Fs3))
    for attr in ("m", "unit", "delta", "counit", "antipode"):
        assert residual(getattr(DD, attr), getattr(Fs3, attr)) == 0
    Ds3 = dual_hopf(hopf("k[S3]"))
    assert residual(Ds3.m, np.transpose(Ds3.m, (1, 0, 2))) == 0


@pytest.mark.parametrize("spec,group,kind", [
    ("F(Z2)", "Z2", "fn"), ("k[Z2]", "Z2", "gr"), ("F(S3)", "S3", "fn"), ("k[S3]", "S3", "gr"),
])
def test_integral_space_matches_sympy(spec, group, kind):
    H = hopf(spec)
    table = H.group.table
    m, unit, counit = (oracles.hopf_tables_function_algebra if kind == "fn"
                       else oracles.hopf_tables_group_algebra)(table)
    ref = oracles.sympy_integrals(m, unit, counit, H.n)
    ours = integral_space(H)
    assert len(ref) == ours.shape[0] == 1
    r = list(ref[0])
    k = next(i for i, x in enumerate(r) if x != 0)
    expected = [sympy.Rational(x) / r[k] for x in r]
    ours = ours[0] / ours[0][k]
    assert [Fraction(int(sympy.numer(x)), int(sympy.denom(x))) for x in expected] == list(ours)


def test_integrals_pinned():
    p = find_integrals(hopf("F(Z2)"))
    assert list(p.Lambda) == [1, 0]
    assert list(p.phi) == [1, 1]
    p = find_integrals(hopf("k[Z2]"))
    assert list(p.Lambda) == [1, 1]
    assert list(p.phi) == [1, 0]
    assert integral_space(hopf("F(S3)")).shape[0] == 1


def test_semisimplicity_pins():
    H = hopf("F(Z2)")
    p = find_integrals(H)
    assert semisimplicity_test(H, p) == {"ss": True, "css": True}
    assert p.eps_Lambda(H) == 1 and p.phi_one(H) == 2
    H = hopf("k[S3]")
    p = find_integrals(H)
    assert semisimplicity_test(H, p) == {"ss": True, "css": True}
    assert p.eps_Lambda(H) == 6


def test_fourier_examples():
    H = hopf("F(Z2)")
    f = fourier_map(H, find_integrals(H))
    # F(delta_g) = u_g: identity in the dual basis
    assert residual(f, EXACT_FIELD.eye(2)) == 0
    H = hopf("k[Z2]")
    assert EXACT_FIELD.rank(fourier_map(H, find_integrals(H))) == 2
    H = hopf("F(S3)")
    f = fourier_map(H, find_integrals(H))
    assert residual(f @ EXACT_FIELD.inv(f), EXACT_FIELD.eye(6)) == 0


def test_tilde_multiplication_examples():
    H = hopf("F(Z2)")
    p = find_integrals(H)
    mt = tilde_multiplication(H, p)
    t = H.group.table
    for g in range(2):
        for h in range(2):
            want = [1 if k == t[g][h] else 0 for k in range(2)]
            assert list(mt[g, h]) == want
    # Lambda is the unit of m~
    for spec in ("F(S3)", "k[S3]"):
        H = hopf(spec)
        p = find_integrals(H)
        mt = tilde_multiplication(H, p)
        lam_left = np.einsum("a,abk->bk", p.Lambda, mt)
        assert residual(lam_left, EXACT_FIELD.eye(H.n)) == 0
    H = hopf("k[S3]", exact=False)
    assert tilde_module_residual(H, find_integrals(H)) < 1e-12


@pytest.mark.parametrize("spec", FIVE)
def test_dimension_invariant(spec):
    H = hopf(spec)
    assert dimension_invariant(H, find_integrals(H)) == H.n


def test_classical_frobenius_examples():
    H = hopf("F(Z2)")
    p = find_integrals(H)
    sys = classical_frobenius_from_form(H, p.phi)
    assert residual(sys.frobenius_element, EXACT_FIELD.eye(2)) == 0
    assert all(v == 0 for v in sys.residuals.values())
    s = strong_separability_test(sys)
    assert s["canonical"] and s["product"] == 2
    M = matrix_algebra(2)
    sys = classical_frobenius_from_form(M, [1, 0, 0, 1])
    assert residual(sys.e_index, 2 * M.unit) == 0
    with pytest.raises(ValueError):
        classical_frobenius_from_form(M, [0, 0, 0, 0])
    A = truncated_polynomial_algebra(2)
    sys = classical_frobenius_from_form(A, [0, 1])
    assert not strong_separability_test(sys)["canonical"]


def test_kz2_canonical_product():
    H = hopf("k[Z2]")
    sys = classical_frobenius_from_form(H, find_integrals(H).phi)
    assert strong_separability_test(sys)["product"] == 2


def test_json_roundtrip():
    for spec in ("F(S3)", "k[Z3]"):
        H = hopf(spec)
        G = hopf_from_json(hopf_to_json(H))
        assert G.field.exact
        for attr in ("m", "unit", "delta", "counit", "antipode"):
            assert residual(getattr(G, attr), getattr(H, attr)) == 0
    with pytest.raises(ValueError):
        hopf_from_json({"n": 2, "m": [[0, 0, 5, {"q": "1/1"}]], "unit": [], "delta": [],
                        "counit": [], "antipode": []})


def test_integral_side_argument():
    with pytest.raises(ValueError):
        find_integrals(hopf("F(Z2)"), side="middle")
    p = find_integrals(hopf("k[S3]"), side="right")
    assert list(p.Lambda) == [1] * 6


@settings(max_examples=14, deadline=None)
@given(st.sampled_from(GROUPS), st.sampled_from(["function-algebra", "group-algebra"]))
def test_strong_left_invariance_and_tilde_form(group, kind):
    from morita_ssum.hopf import group_table
    H = group_hopf(kind, group_table(group), EXACT_FIELD)
    p = find_integrals(H)
    assert strong_left_invariance_residual(H, p) == 0
    assert tilde_form_residual(H, p) == 0


@settings(max_examples=14, deadline=None)
@given(st.sampled_from(GROUPS), st.sampled_from(["function-algebra", "group-algebra"]))
def test_dual_is_involution_and_preserves_invariant(group, kind):
    from morita_ssum.hopf import group_table
    H = group_hopf(kind, group_table(group), EXACT_FIELD)
    D = dual_hopf(H)
    DD = dual_hopf(D)
    for attr in ("m", "unit", "delta", "counit", "antipode"):
        assert residual(getattr(DD, attr), getattr(H, attr)) == 0
    assert dimension_invariant(H, find_integrals(H)) == dimension_invariant(D, find_integrals(D))


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(GROUPS))
def test_complex_backend_agrees(group):
    H = named_hopf(f"F({group})", COMPLEX_FIELD)
    assert validate_hopf(H).passed
    assert abs(dimension_invariant(H, find_integrals(H)) - H.n) < 1e-9
