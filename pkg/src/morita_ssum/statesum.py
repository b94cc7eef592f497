"""Triangulations and the branched state sum.

Every tetrahedron carries a local vertex order; edges point from the lower to
the higher local vertex, and face gluings preserve the order.  A tetrahedron
with edges a=01, b=12, c=23, d=03, e=02, f=13 contributes

    F^{abc}_d[e mu nu; f rho sigma] / sqrt(d_e d_f)       (positive)
    Finv^{abc}_d[e mu nu; f rho sigma] / sqrt(d_e d_f)    (negative)

with mu, nu, rho, sigma living on the faces 012, 023, 123, 013.  The sum is

    Z = prod_v Dsq(color v)^-1  sum_colorings  prod_e d(e)  contract(prod_t W_t).
"""
from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .numerics import fsum_complex
from .skeletal import InputError, SkeletalData

# local vertex pairs of the six edges, in the order a, b, c, d, e, f
TET_EDGES = ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3))
_EDGE_SLOT = {p: k for k, p in enumerate(TET_EDGES)}


def face_vertices(k):
    """Local vertices of the face opposite local vertex k, in order."""
    return tuple(i for i in range(4) if i != k)


def face_edge_slots(k):
    """Edge slots (ij, jl, il) of the face opposite k."""
    i, j, l = face_vertices(k)
    return _EDGE_SLOT[(i, j)], _EDGE_SLOT[(j, l)], _EDGE_SLOT[(i, l)]


class _DSU:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


@dataclass(eq=False)
class Triangulation:
    n_vertices: int
    tets: list  # vertex ids in local order
    faces: list  # face id opposite local vertex k
    edges: list  # edge ids in TET_EDGES order
    signs: list
    n_faces: int
    n_edges: int
    pi1: str | None = None
    name: str = ""
    simplicial: bool = False
    edge_ends: dict = field(default_factory=dict)

    @property
    def euler(self):
        return self.n_vertices - self.n_edges + self.n_faces - len(self.tets)

    def face_uses(self):
        uses = {}
        for t, fs in enumerate(self.faces):
            for k, f in enumerate(fs):
                uses.setdefault(f, []).append((t, k))
        return uses

    def face_edges(self, f):
        t, k = self.face_uses()[f][0]
        return tuple(self.edges[t][s] for s in face_edge_slots(k))

    def validate(self):
        uses = self.face_uses()
        if len(uses) != self.n_faces:
            raise InputError("face ids are not contiguous")
        for f, u in sorted(uses.items()):
            if len(u) == 1:
                raise InputError(f"triangle {f} shared once (boundary): not closed")
            if len(u) != 2:
                raise InputError(f"triangle {f} shared {len(u)} times: not a manifold")
            (t1, k1), (t2, k2) = u
            e1 = [self.edges[t1][s] for s in face_edge_slots(k1)]
            e2 = [self.edges[t2][s] for s in face_edge_slots(k2)]
            v1 = [self.tets[t1][i] for i in face_vertices(k1)]
            v2 = [self.tets[t2][i] for i in face_vertices(k2)]
            if e1 != e2 or v1 != v2:
                raise InputError(f"triangle {f} glued inconsistently with the vertex orders")
            o1 = self.signs[t1] * (-1) ** k1
            o2 = self.signs[t2] * (-1) ** k2
            if o1 + o2 != 0:
                raise InputError(f"triangle {f}: induced orientations agree (not coherently oriented)")
        for t, es in enumerate(self.edges):
            for s, (i, j) in enumerate(TET_EDGES):
                ends = (self.tets[t][i], self.tets[t][j])
                if self.edge_ends.setdefault(es[s], ends) != ends:
                    raise InputError(f"edge {es[s]} has inconsistent endpoints")
        if self.euler != 0:
            raise InputError(f"Euler characteristic {self.euler} != 0")
        return self

    def to_json(self) -> dict:
        if self.simplicial:
            tets = []
            for vs, s in zip(self.tets, self.signs):
                vs = list(vs)
                if s < 0:
                    vs[0], vs[1] = vs[1], vs[0]
                tets.append(vs)
            out = {"vertices": self.n_vertices, "tets": tets}
        else:
            out = {"vertices": self.n_vertices, "tets": [list(t) for t in self.tets],
                   "faces": [list(f) for f in self.faces], "edges": [list(e) for e in self.edges],
                   "signs": list(self.signs)}
        if self.pi1:
            out["pi1"] = self.pi1
        if self.name:
            out["name"] = self.name
        return out


def _parity(perm) -> int:
    perm = list(perm)
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def from_simplicial(n_vertices: int, tets, pi1=None, name="") -> Triangulation:
    local, signs = [], []
    for t in tets:
        t = [int(x) for x in t]
        if len(t) != 4 or len(set(t)) != 4:
            raise InputError(f"tetrahedron {t} does not have 4 distinct vertices")
        if max(t) >= n_vertices or min(t) < 0:
            raise InputError(f"tetrahedron {t} uses an unknown vertex")
        local.append(tuple(sorted(t)))
        signs.append(_parity(t))
    face_id, edge_id = {}, {}
    faces, edges = [], []
    for vs in local:
        faces.append([face_id.setdefault(tuple(vs[i] for i in face_vertices(k)), len(face_id))
                      for k in range(4)])
        edges.append([edge_id.setdefault((vs[i], vs[j]), len(edge_id)) for i, j in TET_EDGES])
    used = {v for t in local for v in t}
    if len(used) != n_vertices:
        raise InputError("some vertices are not used by any tetrahedron")
    tri = Triangulation(n_vertices, local, faces, edges, signs, len(face_id), len(edge_id),
                        pi1, name, simplicial=True)
    return tri.validate()


def from_gluing(tets, faces, signs=None, pi1=None, name="", edges=None) -> Triangulation:
    """Singular triangulation from face ids; vertex and edge classes follow from the gluing.

    ``tets`` give per-tetrahedron vertex labels (only used to name the classes);
    missing signs are found by propagating a coherent orientation.
    """
    nt = len(faces)
    uses = {}
    for t, fs in enumerate(faces):
        if len(fs) != 4:
            raise InputError("each tetrahedron needs 4 face ids")
        for k, f in enumerate(fs):
            uses.setdefault(f, []).append((t, k))
    for f, u in uses.items():
        if len(u) == 1:
            raise InputError(f"triangle {f} shared once (boundary): not closed")
        if len(u) != 2:
            raise InputError(f"triangle {f} shared {len(u)} times: not a manifold")
    vd, ed = _DSU(), _DSU()
    for (t1, k1), (t2, k2) in uses.values():
        for a, b in zip(face_vertices(k1), face_vertices(k2)):
            vd.union((t1, a), (t2, b))
        for a, b in zip(face_edge_slots(k1), face_edge_slots(k2)):
            ed.union((t1, a), (t2, b))
    vid, eid = {}, {}
    vlist = [[vid.setdefault(vd.find((t, i)), len(vid)) for i in range(4)] for t in range(nt)]
    elist = [[eid.setdefault(ed.find((t, s)), len(eid)) for s in range(6)] for t in range(nt)]
    if edges is not None and [list(e) for e in edges] != elist:
        # accept any relabeling that induces the same partition
        if _partition(edges) != _partition(elist):
            raise InputError("edge ids disagree with the face gluing")
    if tets is not None and _partition(tets) != _partition(vlist):
        raise InputError("vertex ids disagree with the face gluing")
    if signs is None:
        signs = _orient(faces, uses)
    if len(signs) != nt or any(s not in (1, -1) for s in signs):
        raise InputError("signs must be +1 or -1 for every tetrahedron")
    face_ids = sorted(uses)
    remap = {f: i for i, f in enumerate(face_ids)}
    flist = [[remap[f] for f in fs] for fs in faces]
    tri = Triangulation(len(vid), vlist, flist, elist, list(signs), len(face_ids), len(eid), pi1, name)
    return tri.validate()


def _partition(lists):
    """Canonical form of the equivalence relation 'same id' on positions."""
    seen = {}
    return [[seen.setdefault(x, len(seen)) for x in row] for row in lists]


def _orient(faces, uses):
    nt = len(faces)
    signs = [0] * nt
    for start in range(nt):
        if signs[start]:
            continue
        signs[start] = 1
        stack = [start]
        while stack:
            t = stack.pop()
            for k, f in enumerate(faces[t]):
                for t2, k2 in uses[f]:
                    if (t2, k2) == (t, k):
                        continue
                    want = -signs[t] * (-1) ** k * (-1) ** k2
                    if signs[t2] == 0:
                        signs[t2] = want
                        stack.append(t2)
                    elif signs[t2] != want:
                        raise InputError("triangulation is not orientable")
    return signs


def triangulation_from_json(obj: dict) -> Triangulation:
    try:
        if "faces" in obj:
            return from_gluing(obj.get("tets"), obj["faces"], obj.get("signs"), obj.get("pi1"),
                               obj.get("name", ""), obj.get("edges"))
        return from_simplicial(int(obj["vertices"]), obj["tets"], obj.get("pi1"), obj.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed triangulation: {exc}") from exc


def load_triangulation(path) -> Triangulation:
    with open(path) as fh:
        obj = json.load(fh)
    obj.setdefault("name", Path(path).stem)
    return triangulation_from_json(obj)


# --------------------------------------------------------------------------
# bundled manifolds


def boundary_4simplex() -> Triangulation:
    tets = []
    for omit in range(5):
        vs = [v for v in range(5) if v != omit]
        if omit % 2:
            vs[0], vs[1] = vs[1], vs[0]
        tets.append(vs)
    return from_simplicial(5, tets, "trivial", "s3_5tet")


def _from_cover(tets, canon, pi1, name):
    """Glue tetrahedra given as ordered point tuples; faces with equal canon() keys are identified."""
    keys = {}
    faces = []
    for t in tets:
        row = []
        for k in range(4):
            pts = tuple(t[i] for i in face_vertices(k))
            row.append(keys.setdefault(canon(pts), len(keys)))
        faces.append(row)
    return from_gluing(None, faces, None, pi1, name)


def lens_space(p: int, q: int = 1) -> Triangulation:
    """L(p, q) from p tetrahedra around the axis of a bipyramid."""
    if math.gcd(p, q) != 1 or p < 2:
        raise ValueError("need p >= 2 and gcd(p, q) = 1")
    tets = [(("N",), ("S",), ("v", i), ("v", (i + 1) % p)) for i in range(p)]

    def canon(pts):
        # upper faces (N v_i v_i+1) are glued to lower faces (S v_i+q v_i+q+1)
        if ("N",) in pts and ("S",) not in pts:
            return tuple(("S",) if x == ("N",) else ("v", (x[1] + q) % p) for x in pts)
        return pts

    tag = "Zn(%d)" % p
    return _from_cover(tets, canon, tag, f"l{p}{q}" if p != 2 else "rp3")


def s2_times_s1() -> Triangulation:
    """Boundary of a tetrahedron times a circle: staircase prisms glued top to bottom."""
    tets = []
    for tri in itertools.combinations(range(4), 3):
        a, b, c = tri
        tets.append(((a, 0), (b, 0), (c, 0), (c, 1)))
        tets.append(((a, 0), (b, 0), (b, 1), (c, 1)))
        tets.append(((a, 0), (a, 1), (b, 1), (c, 1)))

    def canon(pts):
        m = min(t for _, t in pts)
        return tuple((v, t - m) for v, t in pts)

    return _from_cover(tets, canon, "Z", "s2xs1")


def three_torus() -> Triangulation:
    """Kuhn (Freudenthal) triangulation of the cube with opposite faces identified."""
    tets = []
    for perm in itertools.permutations(range(3)):
        pt = [0, 0, 0]
        chain = [tuple(pt)]
        for axis in perm:
            pt[axis] += 1
            chain.append(tuple(pt))
        tets.append(tuple(chain))

    def canon(pts):
        base = pts[0]
        return tuple(tuple(x - y for x, y in zip(p, base)) for p in pts)

    return _from_cover(tets, canon, "Z3", "t3")


def pachner_23(M: Triangulation, face: int) -> Triangulation:
    """Replace the two tetrahedra around ``face`` by three around a new edge."""
    uses = M.face_uses()
    if face not in uses:
        raise InputError(f"no triangle {face}")
    (t1, k1), (t2, k2) = uses[face]
    if t1 == t2:
        raise InputError("move not applicable: the triangle is glued to its own tetrahedron")
    p, q = M.tets[t1][k1], M.tets[t2][k2]
    if p == q:
        raise InputError("move not applicable: both tetrahedra share the apex vertex")
    shared = set(M.faces[t1]) & set(M.faces[t2])
    if len(shared) != 1:
        raise InputError("move not applicable: tetrahedra share more than one triangle")
    # points: x, y, z (face order) plus the apexes; merge the two local orders
    fx = face_vertices(k1)
    order1 = [("P" if i == k1 else ("x", fx.index(i))) for i in range(4)]
    order2 = [("Q" if i == k2 else ("x", face_vertices(k2).index(i))) for i in range(4)]
    pos_p = order1.index("P")  # number of face points before P
    pos_q = order2.index("Q")
    chain = [("x", 0), ("x", 1), ("x", 2)]
    merged = chain[:pos_p] + ["P"] + chain[pos_p:]
    ins = pos_q + (1 if pos_p <= pos_q else 0)
    merged = merged[:ins] + ["Q"] + merged[ins:]
    rank = {pt: i for i, pt in enumerate(merged)}
    vert = {"P": p, "Q": q}
    for j, i in enumerate(fx):
        vert[("x", j)] = M.tets[t1][i]
    # existing face ids and edge ids, keyed by point sets
    face_of, edge_of = {}, {}
    for t, k, label in ((t1, k1, "P"), (t2, k2, "Q")):
        order = order1 if label == "P" else order2
        for kk in range(4):
            pts = frozenset(order[i] for i in face_vertices(kk))
            face_of[pts] = M.faces[t][kk]
        for s, (i, j) in enumerate(TET_EDGES):
            edge_of[frozenset((order[i], order[j]))] = M.edges[t][s]
    new_face = M.n_faces
    new_edge = M.n_edges
    edge_of[frozenset(("P", "Q"))] = new_edge
    sign_at = {}
    for t, k, label in ((t1, k1, "P"), (t2, k2, "Q")):
        order = order1 if label == "P" else order2
        for kk in range(4):
            pts = frozenset(order[i] for i in face_vertices(kk))
            sign_at[pts] = M.signs[t] * (-1) ** kk
    tets, faces, edges, signs = [], [], [], []
    inner = {}
    keep = [t for t in range(len(M.tets)) if t not in (t1, t2)]
    for pair in itertools.combinations(range(3), 2):
        pts = sorted(["P", "Q"] + [("x", j) for j in pair], key=rank.get)
        row_f, sign = [], None
        for kk in range(4):
            fpts = frozenset(pts[i] for i in face_vertices(kk))
            if fpts in face_of and fpts != frozenset(("x", j) for j in range(3)):
                row_f.append(face_of[fpts])
                sign = sign_at[fpts] * (-1) ** kk
            else:
                if fpts not in inner:
                    inner[fpts] = new_face
                    new_face += 1
                row_f.append(inner[fpts])
        tets.append([vert[x] for x in pts])
        faces.append(row_f)
        edges.append([edge_of[frozenset((pts[i], pts[j]))] for i, j in TET_EDGES])
        signs.append(sign)
    all_tets = [list(M.tets[t]) for t in keep] + tets
    all_faces = [list(M.faces[t]) for t in keep] + faces
    all_edges = [list(M.edges[t]) for t in keep] + edges
    all_signs = [M.signs[t] for t in keep] + signs
    # the shared triangle disappears: renumber faces densely
    used = sorted({f for row in all_faces for f in row})
    remap = {f: i for i, f in enumerate(used)}
    all_faces = [[remap[f] for f in row] for row in all_faces]
    tri = Triangulation(M.n_vertices, all_tets, all_faces, all_edges, all_signs, len(used),
                        M.n_edges + 1, M.pi1, M.name + "+23")
    return tri.validate()


def bundled_manifolds() -> dict:
    s3 = boundary_4simplex()
    s3b = pachner_23(s3, 0)
    s3b.name = "s3_6tet"
    return {
        "s3_5tet": s3,
        "s3_6tet": s3b,
        "rp3": lens_space(2, 1),
        "l31": lens_space(3, 1),
        "s2xs1": s2_times_s1(),
        "t3": three_torus(),
    }


def fixtures_dir() -> Path:
    env = os.environ.get("MORITA_SSUM_FIXTURES")
    return Path(env) if env else Path(__file__).parent / "fixtures"


def bundled(name: str) -> Triangulation:
    path = fixtures_dir() / f"{name}.json"
    if path.exists():
        return load_triangulation(path)
    mans = bundled_manifolds()
    if name not in mans:
        raise InputError(f"unknown manifold {name!r}")
    return mans[name]


# --------------------------------------------------------------------------
# flat bundle oracle


def flat_bundle_oracle(pi1: str, table) -> float:
    table = np.asarray(table)
    n = len(table)
    e = next(i for i in range(n) if all(table[i, j] == j for j in range(n)))
    tag = pi1.strip()
    if tag == "trivial":
        count = 1
    elif tag == "Z":
        count = n
    elif tag.startswith("Zn(") and tag.endswith(")"):
        p = int(tag[3:-1])
        count = 0
        for g in range(n):
            x = e
            for _ in range(p):
                x = table[x, g]
            count += x == e
    elif tag == "Z3":
        comm = table == table.T
        count = sum(1 for a in range(n) for b in range(n) for c in range(n)
                    if comm[a, b] and comm[a, c] and comm[b, c])
    else:
        raise InputError(f"unsupported fundamental group tag {pi1!r}")
    return count / n


# --------------------------------------------------------------------------
# the state sum


@dataclass
class _Plan:
    order: list  # edge visiting order
    checks: list  # faces completed after assigning order[k]
    allowed: list  # per edge: candidate label indices


class StateSum:
    def __init__(self, M: Triangulation, data: SkeletalData, coloring=None):
        self.M = M
        self.data = data
        colors = data.colors()
        if coloring is None:
            coloring = [data.corners[data.unit][0]] * M.n_vertices
        if len(coloring) != M.n_vertices:
            raise InputError(f"need one color per vertex ({M.n_vertices})")
        for c in coloring:
            if c not in colors:
                raise InputError(f"vertex color {c!r} not available (have {colors})")
        self.coloring = list(coloring)
        self.labels = list(data.labels)
        idx = {a: i for i, a in enumerate(self.labels)}
        self.idx = idx
        L = len(self.labels)
        self.Nmat = np.zeros((L, L, L), dtype=int)
        for (a, b, c), m in data.N.items():
            self.Nmat[idx[a], idx[b], idx[c]] = m
        self.dims = np.array([complex(data.dims[a]) for a in self.labels])
        self.sqd = np.sqrt(self.dims.astype(complex))
        self.F = {tuple(idx[x] for x in k[:6]) + k[6:]: v for k, v in data.F.items()}
        self.Finv = {tuple(idx[x] for x in k[:6]) + k[6:]: v for k, v in data.Finv.items()}
        ends = M.edge_ends
        self.edge_corner = {}
        for e in range(M.n_edges):
            tail, head = ends[e]
            self.edge_corner[e] = (self.coloring[tail], self.coloring[head])
        self.plan = self._make_plan()

    def _make_plan(self) -> _Plan:
        M = self.M
        face_edges = {f: M.face_edges(f) for f in range(M.n_faces)}
        edge_faces = {e: [f for f, es in face_edges.items() if e in es] for e in range(M.n_edges)}
        order, assigned = [], set()
        remaining = set(range(M.n_edges))
        while remaining:
            def score(e):
                done = sum(1 for f in edge_faces[e]
                           if all(x in assigned or x == e for x in face_edges[f]))
                touch = sum(1 for f in edge_faces[e] if any(x in assigned for x in face_edges[f]))
                return (done, touch, len(edge_faces[e]), -e)
            e = max(remaining, key=score)
            order.append(e)
            assigned.add(e)
            remaining.remove(e)
        checks, seen = [], set()
        pos = {e: k for k, e in enumerate(order)}
        for k in range(len(order)):
            now = []
            for f, es in face_edges.items():
                if f not in seen and max(pos[x] for x in es) == k:
                    now.append(es)
                    seen.add(f)
            checks.append(now)
        allowed = []
        for e in range(M.n_edges):
            corner = self.edge_corner[e]
            allowed.append([self.idx[a] for a in self.labels if self.data.corners[a] == corner])
        return _Plan(order, checks, allowed)

    def prefixes(self, depth: int):
        out = []
        plan = self.plan
        depth = min(depth, len(plan.order))

        def rec(k, lab):
            if k == depth:
                out.append(dict(lab))
                return
            e = plan.order[k]
            for x in plan.allowed[e]:
                lab[e] = x
                if all(self.Nmat[lab[a], lab[b], lab[c]] for a, b, c in plan.checks[k]):
                    rec(k + 1, lab)
                del lab[e]

        rec(0, {})
        return out

    def partial(self, prefix: dict) -> complex:
        plan = self.plan
        terms = []
        lab = dict(prefix)
        start = len(prefix)

        def rec(k):
            if k == len(plan.order):
                terms.append(self.amplitude(lab))
                return
            e = plan.order[k]
            for x in plan.allowed[e]:
                lab[e] = x
                if all(self.Nmat[lab[a], lab[b], lab[c]] for a, b, c in plan.checks[k]):
                    rec(k + 1)
            lab.pop(e, None)

        rec(start)
        return fsum_complex(terms)

    def amplitude(self, lab: dict) -> complex:
        M = self.M
        w = 1.0 + 0j
        for e in range(M.n_edges):
            w *= self.dims[lab[e]]
        mults = []
        for f in range(M.n_faces):
            a, b, c = self._face_labels(f, lab)
            mults.append(self.Nmat[a, b, c])
        if max(mults) == 1:
            for t in range(len(M.tets)):
                w *= self._tet_weight(t, lab, (0, 0, 0, 0))
            return w
        return w * self._contract(lab, mults)

    def _face_labels(self, f, lab):
        if not hasattr(self, "_fe"):
            self._fe = [self.M.face_edges(g) for g in range(self.M.n_faces)]
        a, b, c = self._fe[f]
        return lab[a], lab[b], lab[c]

    def _tet_weight(self, t, lab, m):
        es = self.M.edges[t]
        a, b, c, d, e, f = (lab[x] for x in es)
        mu, nu, rho, sigma = m
        key = (a, b, c, d, e, f, mu, nu, rho, sigma)
        table = self.F if self.M.signs[t] > 0 else self.Finv
        return table.get(key, 0.0) / (self.sqd[e] * self.sqd[f])

    def _contract(self, lab, mults):
        M = self.M
        letters = {}
        ops, subs = [], []
        for t in range(len(M.tets)):
            fs = M.faces[t]
            # mu on face opp 3, nu on opp 1, rho on opp 0, sigma on opp 2
            fids = (fs[3], fs[1], fs[0], fs[2])
            shape = tuple(mults[f] for f in fids)
            ten = np.zeros(shape, dtype=complex)
            for m in itertools.product(*(range(s) for s in shape)):
                ten[m] = self._tet_weight(t, lab, m)
            ops.append(ten)
            subs.append("".join(letters.setdefault(f, _letter(len(letters))) for f in fids))
        expr = ",".join(subs) + "->"
        return complex(np.einsum(expr, *ops, optimize="greedy"))

    def vertex_factor(self) -> complex:
        w = 1.0 + 0j
        for c in self.coloring:
            w /= self.data.dsq(c)
        return w

    def evaluate(self, threads: int = 1, depth: int = 3) -> complex:
        pre = self.prefixes(depth)
        if threads > 1 and len(pre) > 1:
            global _WORKER
            _WORKER = self
            try:
                with ProcessPoolExecutor(max_workers=threads) as ex:
                    parts = list(ex.map(_run_prefix, range(len(pre)), [pre] * len(pre), chunksize=1))
            finally:
                _WORKER = None
        else:
            parts = [self.partial(p) for p in pre]
        return self.vertex_factor() * fsum_complex(parts)


_WORKER = None


def _run_prefix(i, pre):
    return _WORKER.partial(pre[i])


def _letter(k):
    s = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if k >= len(s):
        raise ValueError("too many multiplicity faces for einsum")
    return s[k]


def _simplify(z: complex):
    z = complex(z)
    return z.real if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)) else z


def bw_invariant(M: Triangulation, data: SkeletalData, threads: int = 1, depth: int = 3):
    if len(data.units) != 1:
        raise InputError("bw_invariant needs fusion data; use bicolored_invariant for Morita data")
    return _simplify(StateSum(M, data).evaluate(threads, depth))


def bicolored_invariant(M: Triangulation, data: SkeletalData, labels, threads: int = 1, depth: int = 3):
    """State sum over Morita-context data with a fixed vertex coloring (string or list of A/B)."""
    if set(data.units) != {"A", "B"}:
        raise InputError("bicolored_invariant needs Morita context data with corners A and B")
    labels = list(labels)
    if len(labels) != M.n_vertices:
        raise InputError(f"--labels needs {M.n_vertices} entries, got {len(labels)}")
    return _simplify(StateSum(M, data, labels).evaluate(threads, depth))
