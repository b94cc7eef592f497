"""Independent reference computations used to pin expected values.

Nothing here imports the package's algebra code; the routes are chosen to be
different from the implementation (brute force, sympy, explicit formulas).
"""
import itertools
import math

import sympy


def perm_group(n):
    """Symmetric group S_n as permutation tuples with a multiplication table."""
    elems = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[tuple(p[q[k]] for k in range(n))] for q in elems] for p in elems]
    return elems, table


def cyclic(n):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def identity_of(table):
    n = len(table)
    return next(e for e in range(n) if all(table[e][g] == g for g in range(n)))


def conjugacy_classes(table):
    n = len(table)
    e = identity_of(table)
    inv = [next(h for h in range(n) if table[g][h] == e) for g in range(n)]
    seen, classes = set(), []
    for g in range(n):
        if g in seen:
            continue
        cl = {table[table[h][g]][inv[h]] for h in range(n)}
        seen |= cl
        classes.append(cl)
    return classes


def irrep_dims_from_burnside(table):
    """Smallest dims solving sum d^2 = |G| with #classes terms and a trivial rep.

    Enough for the small groups used here (the solution is unique for them).
    """
    n = len(table)
    k = len(conjugacy_classes(table))
    sols = []
    for ds in itertools.combinations_with_replacement(range(1, int(math.isqrt(n)) + 1), k - 1):
        if 1 + sum(d * d for d in ds) == n and all(n % d == 0 for d in ds):
            sols.append(tuple(sorted((1,) + ds)))
    # the number of 1-dim reps is |G/[G,G]|
    e = identity_of(table)
    inv = [next(h for h in range(n) if table[g][h] == e) for g in range(n)]
    comm = {table[table[table[a][b]][inv[a]]][inv[b]] for a in range(n) for b in range(n)}
    # close under multiplication
    grp = set(comm)
    while True:
        new = {table[a][b] for a in grp for b in grp} | grp
        if new == grp:
            break
        grp = new
    ab = n // len(grp)
    sols = [s for s in sols if s.count(1) == ab]
    assert len(sols) == 1, sols
    return list(sols[0])


def flat_colorings(tets, edge_of, n_vertices, table):
    """|Hom(pi1 M, G)| / |G| by counting flat G-colorings of the 1-skeleton.

    tets: vertex tuples in local order; edge_of(t, i, j) gives the edge id of
    the oriented local edge i<j.  Flatness: g_ij g_jk = g_ik on every face.
    For a connected complex the flat colorings number |Hom(pi1, G)| |G|^(V-1).
    """
    n = len(table)
    faces = []
    edges = set()
    for t, vs in enumerate(tets):
        for (i, j, k) in itertools.combinations(range(4), 3):
            faces.append((edge_of(t, i, j), edge_of(t, j, k), edge_of(t, i, k)))
        for i, j in itertools.combinations(range(4), 2):
            edges.add(edge_of(t, i, j))
    order = sorted(edges)
    pos = {e: k for k, e in enumerate(order)}
    by_last = {}
    for f in faces:
        last = max(pos[x] for x in f)
        by_last.setdefault(last, []).append(f)
    color = {}
    count = 0

    def rec(k):
        nonlocal count
        if k == len(order):
            count += 1
            return
        e = order[k]
        for g in range(n):
            color[e] = g
            if all(table[color[a]][color[b]] == color[c] for a, b, c in by_last.get(k, [])):
                rec(k + 1)
        del color[e]

    rec(0)
    return sympy.Rational(count, n ** n_vertices)


def sympy_integrals(m, unit, counit, n):
    """Basis of left integrals (x Lambda = eps(x) Lambda) from a sympy nullspace."""
    lam = sympy.symbols(f"l0:{n}")
    eqs = []
    for x in range(n):
        for k in range(n):
            lhs = sum(m[x][j][k] * lam[j] for j in range(n))
            eqs.append(lhs - counit[x] * lam[k])
    A = sympy.Matrix([[sympy.diff(e, v) for v in lam] for e in eqs])
    ns = A.nullspace()
    return ns


def hopf_tables_function_algebra(table):
    """Structure constants of F(G) in the delta basis, as nested lists."""
    n = len(table)
    e = identity_of(table)
    m = [[[1 if (i == j == k) else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [1] * n
    counit = [1 if g == e else 0 for g in range(n)]
    return m, unit, counit


def hopf_tables_group_algebra(table):
    n = len(table)
    e = identity_of(table)
    m = [[[1 if table[i][j] == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [1 if g == e else 0 for g in range(n)]
    counit = [1] * n
    return m, unit, counit


FIB_S3 = 2 / (5 + math.sqrt(5))
