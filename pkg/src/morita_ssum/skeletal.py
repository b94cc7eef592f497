"""Skeletal data of (multi-)fusion categories: labels, fusion rules, dims and F.

F convention: the associator (ab)c -> a(bc) sends the left fusion tree
|e; mu, nu> (mu: e -> ab, nu: d -> ec) to

    sum F[a,b,c,d,e,f,mu,nu,rho,sigma] |f; rho, sigma>

(rho: f -> bc, sigma: d -> af).  Multiplicity indices are always stored,
even when every N is 0 or 1.

Multi-fusion data carry a corner (left, right) per label; a and b compose
iff right(a) == left(b).  Plain fusion data have every label in ("A", "A").
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .numerics import StructuralError, scalar_from_json, scalar_to_json

PENTAGON_TOL = 1e-9


class InputError(ValueError):
    pass


@dataclass(eq=False)
class SkeletalData:
    labels: list
    unit: str
    dual: dict
    N: dict  # (a, b, c) -> multiplicity, only nonzero entries
    dims: dict
    F: dict  # 10-tuple -> complex
    corners: dict = field(default_factory=dict)  # label -> (left, right)
    units: dict = field(default_factory=dict)  # corner key -> unit label
    name: str = ""

    def __post_init__(self):
        if not self.corners:
            self.corners = {a: ("A", "A") for a in self.labels}
        if not self.units:
            self.units = {"A": self.unit}
        self._fuse = None
        self._finv = None

    # fusion rules
    def corner(self, a):
        return self.corners[a]

    def composable(self, a, b) -> bool:
        return self.corners[a][1] == self.corners[b][0]

    def n(self, a, b, c) -> int:
        return self.N.get((a, b, c), 0)

    def fuse(self, a, b) -> list:
        """[(c, N_ab^c)] with N > 0."""
        if self._fuse is None:
            table = {}
            for (x, y, z), m in self.N.items():
                if m:
                    table.setdefault((x, y), []).append((z, m))
            for v in table.values():
                v.sort(key=lambda t: self.labels.index(t[0]))
            self._fuse = table
        return self._fuse.get((a, b), [])

    def in_corner(self, left, right) -> list:
        return [a for a in self.labels if self.corners[a] == (left, right)]

    def colors(self) -> list:
        return sorted(self.units)

    def dsq(self, color="A"):
        return sum(self.dims[a] ** 2 for a in self.in_corner(color, color))

    @property
    def Dsq(self):
        return self.dsq(self.corners[self.unit][0])

    @property
    def multiplicity_free(self) -> bool:
        return all(m <= 1 for m in self.N.values())

    def restrict(self, color: str) -> "SkeletalData":
        """The diagonal fusion category at one color."""
        labs = self.in_corner(color, color)
        keep = set(labs)
        N = {k: m for k, m in self.N.items() if set(k) <= keep}
        F = {k: v for k, v in self.F.items() if set(k[:6]) <= keep}
        return SkeletalData(labs, self.units[color], {a: self.dual[a] for a in labs}, N,
                            {a: self.dims[a] for a in labs}, F, name=f"{self.name}[{color}]")

    # F blocks
    def left_keys(self, a, b, c, d):
        out = []
        for e, m1 in self.fuse(a, b):
            m2 = self.n(e, c, d)
            for mu in range(m1):
                for nu in range(m2):
                    out.append((e, mu, nu))
        return out

    def right_keys(self, a, b, c, d):
        out = []
        for f, m1 in self.fuse(b, c):
            m2 = self.n(a, f, d)
            for rho in range(m1):
                for sigma in range(m2):
                    out.append((f, rho, sigma))
        return out

    def block(self, a, b, c, d):
        """(left keys, right keys, matrix M[right, left])."""
        lk = self.left_keys(a, b, c, d)
        rk = self.right_keys(a, b, c, d)
        m = np.zeros((len(rk), len(lk)), dtype=complex)
        for i, (f, rho, sigma) in enumerate(rk):
            for j, (e, mu, nu) in enumerate(lk):
                key = (a, b, c, d, e, f, mu, nu, rho, sigma)
                m[i, j] = self.F.get(key, 0.0)
        return lk, rk, m

    def quadruples(self):
        """Admissible (a, b, c, d) with a nonempty fusion space."""
        for a, b, c in itertools.product(self.labels, repeat=3):
            if not (self.composable(a, b) and self.composable(b, c)):
                continue
            ds = set()
            for e, _ in self.fuse(a, b):
                ds.update(d for d, _ in self.fuse(e, c))
            for d in self.labels:
                if d in ds:
                    yield a, b, c, d

    @property
    def Finv(self) -> dict:
        """Entries of the inverse associator a(bc) -> (ab)c, keyed like F."""
        if self._finv is None:
            out = {}
            for a, b, c, d in self.quadruples():
                lk, rk, m = self.block(a, b, c, d)
                if len(lk) != len(rk):
                    raise StructuralError(f"F block {(a, b, c, d)} is not square")
                inv = np.linalg.inv(m)
                for j, (e, mu, nu) in enumerate(lk):
                    for i, (f, rho, sigma) in enumerate(rk):
                        out[(a, b, c, d, e, f, mu, nu, rho, sigma)] = inv[j, i]
            self._finv = out
        return self._finv


# --------------------------------------------------------------------------
# validation


@dataclass
class SkeletalReport:
    residuals: dict
    missing: list
    tol: float = PENTAGON_TOL

    @property
    def checks(self):
        return [{"name": k, "residual": float(v), "pass": bool(v <= self.tol)}
                for k, v in self.residuals.items()]

    @property
    def passed(self) -> bool:
        return not self.missing and all(c["pass"] for c in self.checks)

    @property
    def failed(self):
        return [c["name"] for c in self.checks if not c["pass"]]

    def as_dict(self):
        return {"checks": self.checks, "passed": self.passed, "missing": self.missing}


def validate_skeletal(data: SkeletalData, tol: float = PENTAGON_TOL, pentagon: bool = True) -> SkeletalReport:
    res = {}
    lab = data.labels
    # units and duals
    worst = 0
    for a in lab:
        left, right = data.corners[a]
        ul, ur = data.units[left], data.units[right]
        for b in lab:
            if data.composable(ul, b) and data.corners[b][0] == left:
                worst = max(worst, abs(data.n(ul, a, b) - (a == b)))
            if data.composable(a, ur) and data.corners[b][1] == right:
                worst = max(worst, abs(data.n(a, ur, b) - (a == b)))
            if data.composable(a, b) and data.corners[b][1] == left:
                worst = max(worst, abs(data.n(a, b, ul) - (b == data.dual[a])))
    res["unit_fusion"] = worst
    res["dual_involution"] = max((0 if data.dual[data.dual[a]] == a else 1) for a in lab)
    dd = 0.0
    for a, b in itertools.product(lab, repeat=2):
        if data.composable(a, b):
            rhs = sum(m * data.dims[c] for c, m in data.fuse(a, b))
            dd = max(dd, abs(data.dims[a] * data.dims[b] - rhs))
    res["dim_product"] = dd
    res["dim_dual"] = max(abs(data.dims[a] - data.dims[data.dual[a]]) for a in lab)
    missing = []
    for a, b, c, d in data.quadruples():
        lk, rk, _ = data.block(a, b, c, d)
        if len(lk) != len(rk):
            missing.append([a, b, c, d, "block not square"])
            continue
        for (e, mu, nu), (f, rho, sigma) in itertools.product(lk, rk):
            key = (a, b, c, d, e, f, mu, nu, rho, sigma)
            if key not in data.F:
                missing.append(list(key))
    if missing:
        raise InputError(f"missing F entries for admissible keys, e.g. {missing[0]}")
    if pentagon:
        res["pentagon"] = pentagon_residual(data)
    return SkeletalReport(res, missing, tol)


def pentagon_residual(data: SkeletalData) -> float:
    F = data.F
    worst = 0.0
    lab = data.labels
    fuse = data.fuse
    for a, b, c, d in itertools.product(lab, repeat=4):
        if not (data.composable(a, b) and data.composable(b, c) and data.composable(c, d)):
            continue
        # all ((ab)c)d trees: p in ab, q in pc, x in qd
        for p, m_p in fuse(a, b):
            for q, m_q in fuse(p, c):
                for x, m_x in fuse(q, d):
                    for mu1, mu2, mu3 in itertools.product(range(m_p), range(m_q), range(m_x)):
                        lhs = {}
                        # path 1: alpha_{ab,c,d} then alpha_{a,b,cd}
                        for r, m_r in fuse(c, d):
                            for lam in range(data.n(p, r, x)):
                                for kap in range(m_r):
                                    c1 = F.get((p, c, d, x, q, r, mu2, mu3, kap, lam), 0)
                                    if c1 == 0:
                                        continue
                                    for s, m_s in fuse(b, r):
                                        for rho in range(m_s):
                                            for sig in range(data.n(a, s, x)):
                                                c2 = F.get((a, b, r, x, p, s, mu1, lam, rho, sig), 0)
                                                k = (r, kap, s, rho, sig)
                                                lhs[k] = lhs.get(k, 0) + c1 * c2
                        rhs = {}
                        # path 2: alpha_{a,b,c} id, alpha_{a,bc,d}, id alpha_{b,c,d}
                        for u, m_u in fuse(b, c):
                            for al in range(m_u):
                                for be in range(data.n(a, u, q)):
                                    c1 = F.get((a, b, c, q, p, u, mu1, mu2, al, be), 0)
                                    if c1 == 0:
                                        continue
                                    for s, m_s in fuse(u, d):
                                        for ga in range(m_s):
                                            for sig in range(data.n(a, s, x)):
                                                c2 = F.get((a, u, d, x, q, s, be, mu3, ga, sig), 0)
                                                if c2 == 0:
                                                    continue
                                                for r, m_r in fuse(c, d):
                                                    for kap in range(m_r):
                                                        for rho in range(data.n(b, r, s)):
                                                            c3 = F.get((b, c, d, s, u, r, al, ga, kap, rho), 0)
                                                            k = (r, kap, s, rho, sig)
                                                            rhs[k] = rhs.get(k, 0) + c1 * c2 * c3
                        for k in set(lhs) | set(rhs):
                            worst = max(worst, abs(lhs.get(k, 0) - rhs.get(k, 0)))
    return float(worst)


# --------------------------------------------------------------------------
# 6j symbols


@dataclass
class SixJ:
    table: dict  # same keys as F
    symmetry_residual: float | None
    pseudo_real: list
    branch: str = "principal square root of d_e d_f"


def frobenius_schur(data: SkeletalData, a) -> complex | None:
    """d_a F^{a abar a}_a[1;1] for self-dual multiplicity-free a (gauge invariant sign)."""
    if data.dual[a] != a:
        return None
    u = data.units[data.corners[a][0]]
    key = (a, a, a, a, u, data.units[data.corners[a][1]], 0, 0, 0, 0)
    v = data.F.get(key)
    if v is None:
        return None
    return data.dims[a] * v


def symmetrized_6j(data: SkeletalData) -> SixJ:
    table = {}
    for key, v in data.F.items():
        e, f = key[4], key[5]
        table[key] = v / np.sqrt(complex(data.dims[e] * data.dims[f]))
    pseudo = []
    for a in data.labels:
        fs = frobenius_schur(data, a)
        if fs is not None and complex(fs).real < 0:
            pseudo.append(a)
    sym = None
    if data.multiplicity_free and len(data.units) == 1:
        sym = tetrahedral_residual(data, table)
    return SixJ(table, sym, pseudo)


_EDGES = {(0, 1): 0, (1, 2): 1, (2, 3): 2, (0, 3): 3, (0, 2): 4, (1, 3): 5}


def tetrahedral_residual(data: SkeletalData, table: dict) -> float:
    """Max deviation of |6j| under the 24 vertex relabelings of the tetrahedron.

    Entries are gauge dependent only through phases in a unitary gauge, so
    the moduli carry the full symmetry.
    """
    mods = {k[:6]: abs(v) for k, v in table.items()}
    worst = 0.0
    for labs, val in mods.items():
        for perm in itertools.permutations(range(4)):
            new = [None] * 6
            for (i, j), slot in _EDGES.items():
                x, y = perm[i], perm[j]
                if x < y:
                    new[slot] = labs[_EDGES[(x, y)]]
                else:
                    new[slot] = data.dual[labs[_EDGES[(y, x)]]]
            other = mods.get(tuple(new))
            if other is not None:
                worst = max(worst, abs(other - val))
    return worst


# --------------------------------------------------------------------------
# extraction from a concrete category


def _fusion_basis(cat, c, x, unitary):
    """Basis of Hom(c, x), echelon gauge, orthonormal when the category is unitary."""
    basis = cat.hom(c, x)
    if not basis:
        return []
    if unitary:
        out = []
        for b in basis:
            v = b.astype(complex)
            for o in out:
                v = v - np.trace(o.conj().T @ v) / c.dim * o
            nrm = np.sqrt(abs(np.trace(v.conj().T @ v)) / c.dim)
            out.append(v / nrm)
        return out
    return list(basis)


def extract_skeletal(cat, simples=None, name: str = "") -> SkeletalData:
    """F symbols of a semisimple (multi-)tensor category from fusion-tree change of basis.

    ``cat`` provides simples(), hom, tensor, tensor_mor, assoc, dim, corner, unit, unitary.
    """
    simples = list(simples if simples is not None else cat.simples())
    names = [s.name for s in simples]
    if len(set(names)) != len(names):
        names = [f"{s.name}#{k}" for k, s in enumerate(simples)]
    lab = dict(zip(names, simples))
    corners = {n: tuple(cat.corner(s)) for n, s in lab.items()}
    unitary = cat.unitary()
    fld = cat.field
    units = {}
    for key in sorted({c[0] for c in corners.values()}):
        u = cat.unit(key)
        for n, s in lab.items():
            if corners[n] == (key, key) and cat.hom(u, s):
                units[key] = n
                break
        else:
            raise StructuralError(f"no simple isomorphic to the unit of corner {key}")

    prod = {}

    def tensor(a, b):
        k = (a, b)
        if k not in prod:
            prod[k] = cat.tensor(lab[a], lab[b])
        return prod[k]

    fb = {}

    def fusion(c, a, b):
        k = (c, a, b)
        if k not in fb:
            fb[k] = _fusion_basis(cat, lab[c], tensor(a, b), unitary)
        return fb[k]

    N = {}
    for a, b in itertools.product(names, repeat=2):
        if corners[a][1] != corners[b][0]:
            continue
        for c in names:
            if corners[c] == (corners[a][0], corners[b][1]):
                m = len(fusion(c, a, b))
                if m:
                    N[(a, b, c)] = m
    dual = {}
    for a in names:
        left = corners[a][0]
        cands = [b for b in names if N.get((a, b, units[left]), 0) == 1]
        if len(cands) != 1:
            raise StructuralError(f"label {a} has no unique dual")
        dual[a] = cands[0]
    dims = {n: complex(cat.dim(s)) for n, s in lab.items()}
    dims = {n: (d.real if abs(d.imag) < 1e-12 else d) for n, d in dims.items()}

    def fuse(a, b):
        return [(c, N[(a, b, c)]) for c in names if (a, b, c) in N]

    F = {}
    for a, b, c in itertools.product(names, repeat=3):
        if corners[a][1] != corners[b][0] or corners[b][1] != corners[c][0]:
            continue
        xa, xb, xc = lab[a], lab[b], lab[c]
        ab = tensor(a, b)
        bc = tensor(b, c)
        alpha = cat.assoc(xa, xb, xc)
        ida, idc = fld.eye(xa.dim), fld.eye(xc.dim)
        ds = {d for e, _ in fuse(a, b) for d, _ in fuse(e, c)}
        for d in names:
            if d not in ds:
                continue
            lk, lt = [], []
            for e, _ in fuse(a, b):
                for mu, m_e in enumerate(fusion(e, a, b)):
                    lift = cat.tensor_mor(lab[e], ab, xc, xc, m_e, idc)
                    for nu, n_d in enumerate(fusion(d, e, c)):
                        lk.append((e, mu, nu))
                        lt.append(alpha @ lift @ n_d)
            rk, rt = [], []
            for f, _ in fuse(b, c):
                for rho, r_f in enumerate(fusion(f, b, c)):
                    lift = cat.tensor_mor(xa, xa, lab[f], bc, ida, r_f)
                    for sig, s_d in enumerate(fusion(d, a, f)):
                        rk.append((f, rho, sig))
                        rt.append(lift @ s_d)
            if len(lk) != len(rk):
                raise StructuralError(f"fusion spaces of {(a, b, c, d)} differ in size")
            basis = np.stack([t.ravel() for t in rt], axis=1).astype(complex)
            target = np.stack([t.ravel() for t in lt], axis=1).astype(complex)
            coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
            if np.linalg.matrix_rank(basis) < len(rk):
                raise StructuralError(f"rank deficiency in basis change for {(a, b, c, d)}")
            err = np.max(np.abs(basis @ coef - target)) if target.size else 0.0
            if err > 1e-7:
                raise StructuralError(f"associator image leaves the tree span for {(a, b, c, d)}")
            for j, (e, mu, nu) in enumerate(lk):
                for i, (f, rho, sig) in enumerate(rk):
                    v = coef[i, j]
                    F[(a, b, c, d, e, f, mu, nu, rho, sig)] = _clean(v)
    unit = units.get("A", next(iter(units.values())))
    return SkeletalData(names, unit, dual, N, dims, F, corners, units, name or getattr(cat, "name", ""))


def _clean(v, eps=1e-13):
    v = complex(v)
    re = 0.0 if abs(v.real) < eps else v.real
    im = 0.0 if abs(v.imag) < eps else v.imag
    return complex(re, im)


def context_skeletal(ctx) -> SkeletalData:
    """Multi-fusion data of all four corners of a Morita context."""
    simples = ctx.labels()
    return extract_skeletal(ctx.cat, simples, name=f"morita[{ctx.name}]")


# --------------------------------------------------------------------------
# builtins


def _group_data(name: str) -> SkeletalData:
    from .hopf import group_table, check_group
    table = np.asarray(group_table(name))
    info = check_group(table)
    n = len(table)
    labs = [f"g{k}" for k in range(n)]
    labs[info.identity] = "e"
    N = {(labs[i], labs[j], labs[table[i, j]]): 1 for i in range(n) for j in range(n)}
    F = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        e = table[i, j]
        f = table[j, k]
        d = table[e, k]
        F[(labs[i], labs[j], labs[k], labs[d], labs[e], labs[f], 0, 0, 0, 0)] = complex(1.0)
    dual = {labs[i]: labs[info.inverse[i]] for i in range(n)}
    return SkeletalData(labs, "e", dual, N, {a: 1.0 for a in labs}, F, name=f"vec_{name.lower()}")


def _fibonacci() -> SkeletalData:
    phi = (1 + math.sqrt(5)) / 2
    labs = ["1", "t"]
    N = {}
    for a, b in itertools.product(labs, repeat=2):
        if a == "1":
            N[(a, b, b)] = 1
        elif b == "1":
            N[(a, b, a)] = 1
        else:
            N[("t", "t", "1")] = 1
            N[("t", "t", "t")] = 1
    data = SkeletalData(labs, "1", {"1": "1", "t": "t"}, N, {"1": 1.0, "t": phi}, {}, name="fibonacci")
    F = {}
    special = {("1", "1"): 1 / phi, ("1", "t"): phi ** -0.5, ("t", "1"): phi ** -0.5, ("t", "t"): -1 / phi}
    for a, b, c, d in data.quadruples():
        for e, _ in data.fuse(a, b):
            if not data.n(e, c, d):
                continue
            for f, _ in data.fuse(b, c):
                if not data.n(a, f, d):
                    continue
                v = special[(e, f)] if (a, b, c, d) == ("t",) * 4 else 1.0
                F[(a, b, c, d, e, f, 0, 0, 0, 0)] = complex(v)
    data.F = F
    return data


def _ising() -> SkeletalData:
    labs = ["1", "s", "p"]
    rules = {("s", "s"): ["1", "p"], ("s", "p"): ["s"], ("p", "s"): ["s"], ("p", "p"): ["1"]}
    N = {}
    for a, b in itertools.product(labs, repeat=2):
        if a == "1":
            N[(a, b, b)] = 1
        elif b == "1":
            N[(a, b, a)] = 1
        else:
            for c in rules[(a, b)]:
                N[(a, b, c)] = 1
    data = SkeletalData(labs, "1", {x: x for x in labs}, N, {"1": 1.0, "s": math.sqrt(2), "p": 1.0},
                        {}, name="ising")
    r = 1 / math.sqrt(2)
    F = {}
    for a, b, c, d in data.quadruples():
        for e, _ in data.fuse(a, b):
            if not data.n(e, c, d):
                continue
            for f, _ in data.fuse(b, c):
                if not data.n(a, f, d):
                    continue
                v = 1.0
                if (a, b, c, d) == ("s", "s", "s", "s"):
                    v = -r if (e, f) == ("p", "p") else r
                elif (a, b, c, d) in (("s", "p", "s", "p"), ("p", "s", "p", "s")):
                    v = -1.0
                F[(a, b, c, d, e, f, 0, 0, 0, 0)] = complex(v)
    data.F = F
    return data


def _rep_s3() -> SkeletalData:
    from .repcat import rep_category
    return extract_skeletal(rep_category("kS3"), name="rep_s3")


BUILTINS = {
    "vec_z2": lambda: _group_data("Z2"),
    "vec_z3": lambda: _group_data("Z3"),
    "vec_s3": lambda: _group_data("S3"),
    "rep_s3": _rep_s3,
    "fibonacci": _fibonacci,
    "ising": _ising,
}


@lru_cache(maxsize=None)
def _builtin_cached(name):
    return BUILTINS[name]()


def builtin(name: str) -> SkeletalData:
    key = name.lower()
    if key not in BUILTINS:
        raise InputError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")
    return _builtin_cached(key)


# --------------------------------------------------------------------------
# JSON


def skeletal_to_json(data: SkeletalData) -> dict:
    out = {
        "name": data.name,
        "labels": list(data.labels),
        "unit": data.unit,
        "dual": dict(data.dual),
        "N": [[a, b, c, m] for (a, b, c), m in sorted(data.N.items(), key=lambda kv: _order(data, kv[0]))],
        "dims": {a: scalar_to_json(data.dims[a]) for a in data.labels},
        "F": [{"key": list(k), "val": scalar_to_json(v)}
              for k, v in sorted(data.F.items(), key=lambda kv: _order(data, kv[0]))],
    }
    if len(data.units) > 1 or any(c != ("A", "A") for c in data.corners.values()):
        out["corners"] = {a: list(data.corners[a]) for a in data.labels}
        out["units"] = dict(data.units)
    return out


def _order(data, key):
    idx = {a: i for i, a in enumerate(data.labels)}
    return tuple(idx[x] if isinstance(x, str) else x for x in key)


def _real_if_close(x):
    x = complex(x)
    return x.real if abs(x.imag) < 1e-14 else x


def skeletal_from_json(obj: dict) -> SkeletalData:
    try:
        labels = list(obj["labels"])
        N = {(a, b, c): int(m) for a, b, c, m in obj["N"] if int(m)}
        dims = {a: _real_if_close(scalar_from_json(v)) for a, v in obj["dims"].items()}
        F = {}
        for ent in obj["F"]:
            k = ent["key"]
            key = tuple(k[:6]) + tuple(int(x) for x in k[6:])
            F[key] = complex(scalar_from_json(ent["val"]))
        corners = {a: tuple(v) for a, v in obj.get("corners", {}).items()}
        return SkeletalData(labels, obj["unit"], dict(obj["dual"]), N, dims, F, corners,
                            dict(obj.get("units", {})), obj.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed skeletal file: {exc}") from exc


def load_skeletal(path) -> SkeletalData:
    with open(path) as fh:
        obj = json.load(fh)
    if "skeletal" in obj and "labels" not in obj:
        obj = obj["skeletal"]
    return skeletal_from_json(obj)


def save_skeletal(data: SkeletalData, path):
    Path(path).write_text(json.dumps(skeletal_to_json(data), indent=1))
