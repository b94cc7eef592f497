"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines
inline; they are also written to the terminal through capsys.disabled().
"""
import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from conftest import context, hopf, reconstruction, regular
from morita_ssum.frobenius import check_axioms, classify
from morita_ssum.hopf import dimension_invariant, find_integrals
from morita_ssum.morita import (
    E0Calculus,
    compare_commutative,
    dimension_balance,
    interchange_suite,
)
from morita_ssum.repcat import irreps, trivial_rep
from morita_ssum.skeletal import builtin, load_skeletal, pentagon_residual
from morita_ssum.statesum import bicolored_invariant, bundled, bw_invariant, fixtures_dir, pachner_23

FIVE = ["F(Z2)", "F(Z3)", "F(S3)", "k[Z2]", "k[S3]"]
TOL = 1e-9
MANIFOLDS = ["s3_5tet", "rp3", "l31", "s2xs1", "t3"]
GROUP_TABLES = {"Z2": oracles.cyclic(2), "Z3": oracles.cyclic(3), "S3": oracles.perm_group(3)[1]}


def report(capsys, n, ok, budget, elapsed, detail=""):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  ({elapsed:.1f}s of {budget}s)  {detail}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_01_dimension_invariant(capsys):
    t0 = time.perf_counter()
    worst = 0.0
    exact_ok = True
    for spec in FIVE:
        H = hopf(spec)
        exact_ok &= dimension_invariant(H, find_integrals(H)) == H.n
        Hc = hopf(spec, exact=False)
        worst = max(worst, abs(dimension_invariant(Hc, find_integrals(Hc)) - Hc.n))
    dt = time.perf_counter() - t0
    report(capsys, 1, exact_ok and worst < TOL and dt < 1, 1, dt, f"exact={exact_ok} complex residual={worst:.2e}")


def _single_entry_faults(F):
    for attr in ("v", "vprime", "w", "wprime"):
        arr = getattr(F, attr)
        for idx in list(np.argwhere(arr != 0))[:3]:
            bad = arr.copy()
            bad[tuple(idx)] += Fraction(1, 2)
            kw = {k: (bad if k == attr else getattr(F, k)) for k in ("v", "vprime", "w", "wprime")}
            yield type(F)(F.Q, **kw)


def test_criterion_02_frobenius_axioms(capsys):
    t0 = time.perf_counter()
    exact_ok, worst, missed, injected = True, 0.0, 0, 0
    for spec in FIVE:
        rep = check_axioms(regular(spec))
        exact_ok &= rep.passed and all(v == 0 for v in rep.residuals.values())
        rc = check_axioms(regular(spec, exact=False))
        worst = max(worst, max(float(v) for v in rc.residuals.values()))
        for bad in _single_entry_faults(regular(spec)):
            injected += 1
            missed += check_axioms(bad).passed
    dt = time.perf_counter() - t0
    ok = exact_ok and worst < TOL and missed == 0 and dt < 5
    report(capsys, 2, ok, 5, dt, f"exact={exact_ok} complex={worst:.2e} faults caught {injected - missed}/{injected}")


def test_criterion_03_canonicity_product(capsys):
    t0 = time.perf_counter()
    exact_ok, worst = True, 0.0
    for spec in FIVE:
        exact_ok &= classify(regular(spec))["product"] == hopf(spec).n
        worst = max(worst, abs(classify(regular(spec, exact=False))["product"] - hopf(spec).n))
    dt = time.perf_counter() - t0
    report(capsys, 3, exact_ok and worst < TOL and dt < 1, 1, dt, f"exact={exact_ok} complex={worst:.2e}")


def test_criterion_04_corner_dimensions(capsys):
    t0 = time.perf_counter()
    lines, ok = [], True
    for spec, g in (("F(Z2)", 2), ("F(Z3)", 3), ("F(S3)", 6)):
        bal = dimension_balance(context(spec))
        good = bal["passed"] and all(abs(v - g) < TOL for v in bal["dims"].values())
        ok &= good
        lines.append(f"{spec}:{sorted(round(float(np.real(v)), 9) for v in bal['dims'].values())}")
    b = sorted(round(float(np.real(d)), 9) for d in context("F(S3)").corner_dims("BB"))
    want = oracles.irrep_dims_from_burnside(GROUP_TABLES["S3"])
    ok &= b == want
    dt = time.perf_counter() - t0
    report(capsys, 4, ok and dt < 30, 30, dt, " ".join(lines) + f" B-corner dims {b} oracle {want}")


def test_criterion_05_interchange_suite(capsys):
    t0 = time.perf_counter()
    e0 = E0Calculus(regular("F(S3)", exact=False))
    out = interchange_suite(e0, irreps(e0.F.Q.H).simples, n=100, rng=np.random.default_rng(2024))
    worst = max(v for group in out.values() if isinstance(group, dict) for v in group.values())
    patterns = sum(len(group) for group in out.values() if isinstance(group, dict))
    dt = time.perf_counter() - t0
    report(capsys, 5, out["passed"] and worst < TOL and dt < 30, 30, dt,
           f"{patterns} patterns x 100 tuples, worst residual {worst:.2e}")


def _hopf_residuals(R):
    vals = [c["residual"] for side in ("A", "B") for c in R.report[side]["checks"]]
    return max(float(abs(complex(v))) for v in vals)


def test_criterion_06_depth_two_reconstruction(capsys):
    t0 = time.perf_counter()
    parts, ok = [], True
    for spec, g in (("F(Z2)", 2), ("F(S3)", 6)):
        R = reconstruction(spec)
        hres = _hopf_residuals(R)
        good = (R.A.n == g and hres < TOL and R.report["S_involutive"] < TOL and R.report["weyl"] < TOL)
        ok &= good
        parts.append(f"{spec}: dim {R.A.n} hopf {hres:.1e} S^2 {R.report['S_involutive']:.1e} "
                     f"weyl {R.report['weyl']:.1e}")
    match = compare_commutative(reconstruction("F(Z2)").A, hopf("F(Z2)", exact=False))
    ok &= match["matched"]
    dt = time.perf_counter() - t0
    report(capsys, 6, ok and dt < 120, 120, dt, "; ".join(parts) + f"; Z2 permutation {match['permutation']}")


def test_criterion_07_pointed_vs_flat_bundles(capsys):
    t0 = time.perf_counter()
    worst, slowest = 0.0, 0.0
    for name in MANIFOLDS:
        M = bundled(name)
        for g, table in GROUP_TABLES.items():
            t1 = time.perf_counter()
            got = bw_invariant(M, builtin(f"vec_{g.lower()}"))
            slowest = max(slowest, time.perf_counter() - t1)
            edge_of = lambda t, i, j: M.edges[t][oracles_slot[(i, j)]]  # noqa: E731
            want = float(oracles.flat_colorings(M.tets, edge_of, M.n_vertices, table))
            worst = max(worst, abs(got - want))
    dt = time.perf_counter() - t0
    report(capsys, 7, worst < TOL and slowest < 60, 60, dt,
           f"15 pairs, worst residual {worst:.2e}, slowest evaluation {slowest:.2f}s")


oracles_slot = {p: k for k, p in enumerate(((0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3)))}


def test_criterion_08_morita_invariance(capsys):
    t0 = time.perf_counter()
    worst, vals = 0.0, []
    for g in ("z2", "s3"):
        data = load_skeletal(fixtures_dir() / f"ctx_vec_{g}.json")
        vec, rep = data.restrict("A"), data.restrict("B")
        for name in MANIFOLDS:
            M = bundled(name)
            a, b = bw_invariant(M, vec), bw_invariant(M, rep)
            worst = max(worst, abs(a - b))
            vals.append(round(float(np.real(a)), 6))
    dt = time.perf_counter() - t0
    report(capsys, 8, worst < 1e-6 and dt < 300, 300, dt, f"10 pairs, worst residual {worst:.2e}")


def test_criterion_09_labeling_independence(capsys):
    t0 = time.perf_counter()
    data = load_skeletal(fixtures_dir() / "ctx_vec_z2.json")
    M = bundled("s3_5tet")
    values = [bicolored_invariant(M, data, labels) for labels in itertools.product("AB", repeat=5)]
    spread = max(abs(a - b) for a in values for b in values)
    dt = time.perf_counter() - t0
    report(capsys, 9, len(values) == 32 and spread < 1e-6 and dt < 120, 120, dt,
           f"32 labelings, value {float(np.real(values[0])):.12f}, spread {spread:.2e}")


def test_criterion_10_normalization_pins(capsys):
    t0 = time.perf_counter()
    fib = builtin("fibonacci")
    want = 2 / (5 + math.sqrt(5))
    M = bundled("s3_5tet")
    a = bw_invariant(M, fib)
    b = bw_invariant(pachner_23(M, 0), fib)
    pent = max(pentagon_residual(fib), pentagon_residual(builtin("ising")))
    ok = abs(a - want) < TOL and abs(b - want) < TOL and pent < 1e-12
    dt = time.perf_counter() - t0
    report(capsys, 10, ok and dt < 30, 30, dt,
           f"S3 {a:.15f} vs {want:.15f}, after 2-3 move {b:.15f}, pentagon {pent:.1e}")


@pytest.mark.parametrize("spec", ["F(Z2)"])
def test_reconstruction_exact_backend(spec):
    # the rational route for criterion 6 on the smallest example: all residuals vanish
    R = reconstruction(spec, exact=True)
    assert _hopf_residuals(R) == 0 and R.report["weyl"] == 0
    assert compare_commutative(R.A, hopf(spec))["matched"]


def test_trivial_rep_sanity():
    assert trivial_rep(hopf("F(Z2)")).dim == 1
