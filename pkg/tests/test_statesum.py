import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from morita_ssum.skeletal import InputError, builtin, load_skeletal
from morita_ssum.statesum import (
    TET_EDGES,
    StateSum,
    bicolored_invariant,
    boundary_4simplex,
    bundled,
    bundled_manifolds,
    bw_invariant,
    flat_bundle_oracle,
    from_gluing,
    from_simplicial,
    pachner_23,
    triangulation_from_json,
)
from morita_ssum.statesum import fixtures_dir

MANIFOLDS = ["s3_5tet", "s3_6tet", "rp3", "l31", "s2xs1", "t3"]
SLOT = {p: k for k, p in enumerate(TET_EDGES)}
GROUPS = {"vec_z2": oracles.cyclic(2), "vec_z3": oracles.cyclic(3), "vec_s3": oracles.perm_group(3)[1]}

# |Hom(pi1, G)| / |G| counted independently by brute-force flat colorings
FLAT = {
    "s3_5tet": (1 / 2, 1 / 3, 1 / 6), "s3_6tet": (1 / 2, 1 / 3, 1 / 6),
    "rp3": (1, 1 / 3, 2 / 3), "l31": (1 / 2, 1, 1 / 2),
    "s2xs1": (1, 1, 1), "t3": (4, 9, 8),
}


def brute_flat(M, table):
    return oracles.flat_colorings(M.tets, lambda t, i, j: M.edges[t][SLOT[(i, j)]], M.n_vertices, table)


def test_boundary_of_4_simplex():
    M = boundary_4simplex()
    assert (M.n_vertices, M.n_edges, M.n_faces, len(M.tets)) == (5, 10, 10, 5)


def test_bundled_counts():
    mans = bundled_manifolds()
    assert mans["t3"].n_edges == 7 and mans["t3"].n_vertices == 1
    assert len(mans["s3_6tet"].tets) == 6
    for M in mans.values():
        assert M.euler == 0


def test_fixture_files_agree_with_constructions():
    for name, M in bundled_manifolds().items():
        F = bundled(name)
        assert (F.n_vertices, F.n_edges, F.n_faces, len(F.tets)) == \
            (M.n_vertices, M.n_edges, M.n_faces, len(M.tets))
        assert F.pi1 == M.pi1


def test_open_complex_rejected():
    tets = [list(t) for t in boundary_4simplex().tets][1:]
    with pytest.raises(InputError, match="shared once"):
        from_simplicial(5, tets)


def test_bad_tetrahedra_rejected():
    with pytest.raises(InputError):
        from_simplicial(4, [[0, 1, 2, 2]])
    with pytest.raises(InputError):
        from_simplicial(4, [[0, 1, 2, 7]])


def test_inconsistent_orientation_rejected():
    obj = bundled("rp3").to_json()
    obj["signs"][0] *= -1
    with pytest.raises(InputError):
        triangulation_from_json(obj)


def test_json_roundtrip():
    for name in MANIFOLDS:
        M = bundled(name)
        back = triangulation_from_json(M.to_json())
        assert back.edges == M.edges and back.faces == M.faces


@pytest.mark.parametrize("name", MANIFOLDS)
def test_brute_force_oracle_matches_table(name):
    M = bundled(name)
    for want, table in zip(FLAT[name], GROUPS.values()):
        assert float(brute_flat(M, table)) == pytest.approx(want)


@pytest.mark.parametrize("name", MANIFOLDS)
@pytest.mark.parametrize("data", list(GROUPS))
def test_pointed_invariant_counts_flat_bundles(name, data):
    M = bundled(name)
    table = GROUPS[data]
    got = bw_invariant(M, builtin(data))
    want = FLAT[name][list(GROUPS).index(data)]
    assert abs(got - want) < 1e-10
    assert abs(flat_bundle_oracle(M.pi1, table) - want) < 1e-12


@pytest.mark.parametrize("name", ["s3_5tet", "s3_6tet"])
def test_fibonacci_sphere(name):
    assert abs(bw_invariant(bundled(name), builtin("fibonacci")) - oracles.FIB_S3) < 1e-10


def test_fibonacci_sphere_value():
    assert oracles.FIB_S3 == pytest.approx(1 / ((5 + math.sqrt(5)) / 2))


def test_ising_and_rep_s3_sphere():
    M = bundled("s3_5tet")
    assert abs(bw_invariant(M, builtin("ising")) - 1 / 4) < 1e-10
    assert abs(bw_invariant(M, builtin("rep_s3")) - 1 / 6) < 1e-10


def test_rep_s3_matches_vec_s3_on_lens_spaces():
    # Rep(G) and Vec(G) are Morita equivalent, so the invariants agree
    for name in ("rp3", "l31"):
        M = bundled(name)
        assert abs(bw_invariant(M, builtin("rep_s3")) - bw_invariant(M, builtin("vec_s3"))) < 1e-10


def test_pachner_move_invariance():
    M = bundled("s2xs1")
    moved = 0
    for f in range(M.n_faces):
        try:
            N = pachner_23(M, f)
        except InputError:
            continue
        moved += 1
        assert len(N.tets) == len(M.tets) + 1
        for name in ("fibonacci", "ising", "vec_s3"):
            assert abs(bw_invariant(N, builtin(name)) - bw_invariant(M, builtin(name))) < 1e-10
    assert moved > 0


def test_threads_agree():
    M = bundled("l31")
    a = bw_invariant(M, builtin("vec_s3"), threads=1)
    b = bw_invariant(M, builtin("vec_s3"), threads=2)
    assert abs(a - b) < 1e-12


def test_bicolored_needs_morita_data():
    with pytest.raises(InputError):
        bicolored_invariant(bundled("s3_5tet"), builtin("vec_s3"), "AAAAA")
    with pytest.raises(InputError):
        bw_invariant(bundled("s3_5tet"), load_skeletal(fixtures_dir() / "ctx_vec_z2.json"))


@pytest.fixture(scope="module")
def morita_z2():
    return load_skeletal(fixtures_dir() / "ctx_vec_z2.json")


@pytest.fixture(scope="module")
def morita_s3():
    return load_skeletal(fixtures_dir() / "ctx_vec_s3.json")


def test_bicolored_examples(morita_s3):
    M = bundled("s3_5tet")
    for labels in ("AAAAA", "BBBBB", "ABABA", "ABBBB"):
        assert abs(bicolored_invariant(M, morita_s3, labels) - 1 / 6) < 1e-10
    with pytest.raises(InputError):
        bicolored_invariant(M, morita_s3, "AB")


def test_bicolored_on_s2xs1(morita_z2):
    M = bundled("s2xs1")
    one = bw_invariant(M, builtin("vec_z2"))
    for labels in ("AAAA", "BBBB", "ABAB", "ABBB"):
        assert abs(bicolored_invariant(M, morita_z2, labels) - one) < 1e-10


@settings(max_examples=10, deadline=None)
@given(st.lists(st.sampled_from("AB"), min_size=5, max_size=5))
def test_any_coloring_gives_the_same_value(labels):
    data = load_skeletal(fixtures_dir() / "ctx_vec_z2.json")
    assert abs(bicolored_invariant(bundled("s3_5tet"), data, labels) - 1 / 2) < 1e-10


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 9), st.sampled_from(["vec_z2", "vec_z3", "fibonacci"]))
def test_random_pachner_moves(face, name):
    M = boundary_4simplex()
    N = pachner_23(M, face)
    assert abs(bw_invariant(N, builtin(name)) - bw_invariant(M, builtin(name))) < 1e-10


def test_statesum_prefixes_partition_the_sum():
    S = StateSum(bundled("s3_5tet"), builtin("fibonacci"))
    whole = S.evaluate(depth=0)
    assert abs(whole - S.evaluate(depth=4)) < 1e-12


def test_gluing_constructor_requires_pairs():
    with pytest.raises(InputError):
        from_gluing([[0, 1, 2, 3]], [[0, 1, 2, 3]])
