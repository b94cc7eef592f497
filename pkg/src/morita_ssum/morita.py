"""The Morita context generated by a canonical Frobenius algebra Q.

Two realizations are kept side by side.

* ``E0Calculus``: 1-morphisms are words Jbar^l X J^t over base objects X and
  2-morphisms are base morphisms X Q^t -> Q^l Y, composed with the
  vertical and horizontal rules built from (v, v', w, w').
* ``BimoduleCategory``: the corners as categories of bimodules over the
  algebras {A: 1, B: Q}.  This one is concrete enough to extract skeletal
  data for the state sum and to reconstruct Hopf algebras.

Corner tags name a 1-morphism by (source, target): a word X J goes from B to
A and is tagged "BA".  For a bimodule with left algebra L and right algebra R
the tag is R + L.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .frobenius import FrobeniusData, classify, trivial_frobenius
from .hopf import StructuredBialgebra, validate_hopf
from .numerics import COMPLEX_FIELD, StructuralError, ein, kron, mm, residual
from .repcat import (
    HomBasis,
    Representation,
    SimpleTable,
    hom_space,
    irreps,
    split_by_endomorphism,
    subrep,
    tensor_product,
    trivial_rep,
)

SEED = 7
TAGS = ("AA", "BA", "AB", "BB")


def _tag(lead: int, trail: int) -> str:
    return {(0, 0): "AA", (0, 1): "BA", (1, 0): "AB", (1, 1): "BB"}[(lead, trail)]


def _lead_trail(tag: str):
    try:
        return {"AA": (0, 0), "BA": (0, 1), "AB": (1, 0), "BB": (1, 1)}[tag]
    except KeyError:
        raise ValueError(f"unknown corner tag {tag!r}") from None


def _eye(fld, n):
    return fld.eye(n)


# --------------------------------------------------------------------------
# E0 calculus


@dataclass(eq=False)
class Word:
    lead: int
    X: Representation
    trail: int

    @property
    def tag(self) -> str:
        return _tag(self.lead, self.trail)


@dataclass(eq=False)
class CornerMorphism:
    source: Word
    target: Word
    payload: np.ndarray

    @property
    def tag(self) -> str:
        return self.source.tag


class E0Calculus:
    def __init__(self, F: FrobeniusData):
        lam1 = classify(F)["lambda1"]
        if lam1 is None or F.field.is_zero(lam1):
            raise StructuralError("lambda1 is not an invertible scalar; no Morita context")
        self.F = F
        self.fld = F.field
        self.Q = F.Q
        self.q = F.dim
        self.lam1 = lam1
        self.lam2 = (F.vprime @ F.v)[0, 0]
        self.one = trivial_rep(F.Q.H)

    def word(self, tag: str, X: Representation) -> Word:
        lead, trail = _lead_trail(tag)
        return Word(lead, X, trail)

    def _pad_right(self, X, t):
        return tensor_product(X, self.Q) if t else X

    def _pad_left(self, X, l):
        return tensor_product(self.Q, X) if l else X

    def hom(self, src: Word, tgt: Word) -> HomBasis:
        if (src.lead, src.trail) != (tgt.lead, tgt.trail):
            raise ValueError("2-morphisms only exist between words of the same corner")
        return hom_space(self._pad_right(src.X, src.trail), self._pad_left(tgt.X, tgt.lead))

    def identity(self, w: Word) -> CornerMorphism:
        fld, n = self.fld, w.X.dim
        p = fld.eye(n)
        if w.trail:
            p = kron(p, self.F.vprime)
        if w.lead:
            p = mm(kron(self.F.v, fld.eye(n)), p)
        return CornerMorphism(w, w, p)

    def vertical(self, t: CornerMorphism, s: CornerMorphism) -> CornerMorphism:
        """t . s = (w' id)^l (id_Q^l t)(s id_Q^t)(id w)^t."""
        if s.target is not t.source and not _same_word(s.target, t.source):
            raise ValueError("vertical composition of non-composable 2-morphisms")
        fld, q = self.fld, self.q
        x, z = s.source.X.dim, t.target.X.dim
        lead, trail = s.source.lead, s.source.trail
        m = s.payload
        if trail:
            m = mm(kron(m, fld.eye(q)), kron(fld.eye(x), self.F.w))
        if lead:
            m = mm(kron(self.F.wprime, fld.eye(z)), kron(fld.eye(q), t.payload), m)
        else:
            m = mm(t.payload, m)
        return CornerMorphism(s.source, t.target, m)

    def composite_word(self, u2: Word, u1: Word) -> Word:
        if u2.trail != u1.lead:
            raise ValueError("1-morphisms are not composable (middle objects differ)")
        if u2.trail:
            X = tensor_product(tensor_product(u2.X, self.Q), u1.X)
        else:
            X = tensor_product(u2.X, u1.X)
        return Word(u2.lead, X, u1.trail)

    def horizontal(self, s2: CornerMorphism, s1: CornerMorphism, src=None, tgt=None) -> CornerMorphism:
        """s2 x s1; with middle object B: (id w' id)(s2 id_Q s1)(id w id)."""
        fld, q = self.fld, self.q
        src = src or self.composite_word(s2.source, s1.source)
        tgt = tgt or self.composite_word(s2.target, s1.target)
        if s2.source.trail != s1.source.lead:
            raise ValueError("horizontal composition of non-composable 2-morphisms")
        if not s2.source.trail:
            return CornerMorphism(src, tgt, kron(s2.payload, s1.payload))
        x, y = s2.source.X.dim, s1.source.X.dim
        x2, y2 = s2.target.X.dim, s1.target.X.dim
        lq = q if s2.source.lead else 1
        tq = q if s1.source.trail else 1
        m = kron(fld.eye(x), self.F.w, fld.eye(y * tq))
        m = mm(kron(fld.eye(lq * x2), self.F.wprime, fld.eye(y2)), kron(s2.payload, fld.eye(q), s1.payload), m)
        return CornerMorphism(src, tgt, m)

    # unit and duality of J
    def unit_and_duality(self) -> dict:
        fld, q = self.fld, self.q
        F = self.F
        lam1 = self.lam1
        iq = fld.eye(q)
        one = self.one
        wJJ = Word(1, one, 1)  # Jbar J
        wJ = Word(0, one, 1)  # J
        wQ = Word(0, self.Q, 0)  # J Jbar as an A-A word
        w1 = Word(0, one, 0)
        p1 = CornerMorphism(wJJ, wJJ, iq / lam1)
        e_j = CornerMorphism(w1, wQ, F.v.copy())
        eta_j = CornerMorphism(wQ, w1, F.vprime.copy())
        d_j = CornerMorphism(wJJ, wJJ, iq.copy())
        eps_j = CornerMorphism(wJJ, wJJ, iq / lam1)
        res = {}
        res["p1_idempotent"] = residual(self.vertical(p1, p1).payload, p1.payload)
        de = self.vertical(d_j, eps_j).payload
        res["d_eps"] = residual(de, lam1 * p1.payload)
        id_j = self.identity(wJ)
        wQJ = Word(0, self.Q, 1)
        left = self.horizontal(e_j, id_j, src=wJ, tgt=wQJ)
        right = self.horizontal(id_j, d_j, src=wQJ, tgt=wQJ)
        tri = self.vertical(right, left)
        res["triangle"] = residual(tri.payload, iq)
        r_j = CornerMorphism(wQJ, wJ, (F.vprime @ F.wprime) / lam1)
        res["r_rprime"] = residual(self.vertical(r_j, tri).payload, id_j.payload)
        res["sandwich"] = self.sandwich_residual()
        return {"p1": p1, "eJ": e_j, "etaJ": eta_j, "dJ": d_j, "epsJ": eps_j,
                "residuals": res, "passed": all(fld.passes(v) for v in res.values())}

    def sandwich(self, s):
        """w'(w' id)(id s id)(w id)w for s in End(Q)."""
        F, fld, q = self.F, self.fld, self.q
        iq = fld.eye(q)
        return mm(F.wprime, kron(F.wprime, iq), kron(iq, s, iq), kron(F.w, iq), F.w)

    def sandwich_residual(self):
        fld = self.fld
        worst = 0.0 if not fld.exact else 0
        for s in hom_space(self.Q, self.Q).basis:
            target = (self.lam1 / self.lam2) * np.trace(s) * fld.eye(self.q)
            worst = max(worst, residual(self.sandwich(s), target))
        return worst

    def unit_is_simple(self) -> bool:
        """1_B is simple iff every sandwich is a scalar (Hom(1, Q) one-dimensional)."""
        return self.fld.passes(self.sandwich_residual()) and \
            hom_space(self.one, self.Q).dim == 1

    # corner objects by idempotent splitting inside E0
    def trace(self, w: Word, s):
        """Categorical trace of s in End(w); closes the Q legs with v and v'."""
        fld = self.fld
        n = w.X.dim
        m = fld.array(s)
        if w.trail:
            m = m @ kron(fld.eye(n), self.F.v)
        if w.lead:
            m = kron(self.F.vprime, fld.eye(n)) @ m
        k = w.lead + w.trail
        scale = np.sqrt(complex(self.lam1 / self.lam2)) ** k
        return scale * np.trace(m)

    def end_algebra(self, w: Word):
        basis = self.hom(w, w).basis
        fld = self.fld
        flat = np.stack([b.ravel() for b in basis], axis=1)
        nb = len(basis)
        mult = fld.zeros((nb, nb, nb))
        for i, bi in enumerate(basis):
            for j, bj in enumerate(basis):
                c = self.vertical(CornerMorphism(w, w, bi), CornerMorphism(w, w, bj)).payload
                mult[i, j], _ = fld.lstsq(flat, c.ravel())
        return basis, mult

    def split(self, w: Word, rng=None):
        """Primitive idempotents of End(w) via Lagrange interpolation in a generic element."""
        rng = rng or np.random.default_rng(SEED)
        basis, mult = self.end_algebra(w)
        nb = len(basis)
        ident = self.identity(w).payload
        flat = np.stack([b.ravel() for b in basis], axis=1)
        one, _ = self.fld.lstsq(flat, ident.ravel())
        z = rng.normal(size=nb) + 1j * rng.normal(size=nb)
        lz = np.einsum("i,ijk->kj", z, mult)  # x -> z . x
        vals = np.linalg.eigvals(lz)
        distinct = []
        for v in vals:
            if all(abs(v - u) > 1e-6 * max(1.0, abs(v)) for u in distinct):
                distinct.append(v)
        idems = []
        for mu in distinct:
            e = one.astype(complex)
            for nu in distinct:
                if nu is mu:
                    continue
                e = (lz @ e - nu * e) / (mu - nu)
            idems.append(sum(c * b for c, b in zip(e, basis)))
        return idems

    def corner_simples(self, tag: str, simples) -> list:
        """Simple (word, idempotent) pairs of one corner, one per iso class."""
        found = []
        for X in simples:
            w = self.word(tag, X)
            for p in self.split(w):
                cand = (w, p)
                if not any(self.hom_rank(c, cand) > 0 for c in found):
                    found.append(cand)
        return found

    def hom_rank(self, a, b) -> int:
        """dim Hom((w_a, p_a), (w_b, p_b)) = rank of s -> p_b . s . p_a."""
        wa, pa = a
        wb, pb = b
        basis = self.hom(wa, wb).basis
        if not basis:
            return 0
        imgs = []
        for s in basis:
            m = self.vertical(CornerMorphism(wb, wb, pb),
                              self.vertical(CornerMorphism(wa, wb, s), CornerMorphism(wa, wa, pa)))
            imgs.append(m.payload.ravel())
        return self.fld.rank(np.stack(imgs))

    def faithfulness_rank(self, src: Word, tgt: Word):
        """(dim Hom, rank of s -> s x id_J); equal when the functor is faithful."""
        basis = self.hom(src, tgt).basis
        if not basis or src.trail:
            return len(basis), len(basis)
        wj = Word(0, self.one, 1)
        idj = self.identity(wj)
        src2 = self.composite_word(src, wj)
        tgt2 = self.composite_word(tgt, wj)
        imgs = [self.horizontal(CornerMorphism(src, tgt, s), idj, src2, tgt2).payload.ravel()
                for s in basis]
        return len(basis), self.fld.rank(np.stack(imgs))


def _same_word(a: Word, b: Word) -> bool:
    return (a.lead, a.trail) == (b.lead, b.trail) and a.X.dim == b.X.dim


class RandomMorphisms:
    """Random 2-morphisms between words over a fixed list of base objects."""

    def __init__(self, calc: E0Calculus, objects, rng=None):
        self.calc = calc
        self.objects = list(objects)
        self.rng = rng if rng is not None else np.random.default_rng(SEED)
        self._bases = {}

    def basis(self, i, j, lead, trail):
        key = (i, j, lead, trail)
        if key not in self._bases:
            src = Word(lead, self.objects[i], trail)
            tgt = Word(lead, self.objects[j], trail)
            self._bases[key] = (src, tgt, self.calc.hom(src, tgt).basis)
        return self._bases[key]

    def coeffs(self, n):
        if self.calc.fld.exact:
            return [int(c) for c in self.rng.integers(-3, 4, size=n)]
        return self.rng.normal(size=n) + 1j * self.rng.normal(size=n)

    def draw(self, i, j, lead, trail) -> CornerMorphism | None:
        src, tgt, basis = self.basis(i, j, lead, trail)
        if not basis:
            return None
        c = self.coeffs(len(basis))
        m = sum(ci * b for ci, b in zip(c, basis))
        return CornerMorphism(src, tgt, self.calc.fld.array(m))

    def chain(self, lead, trail, length):
        """length composable morphisms X0 -> X1 -> ... in one corner (None if a hom is zero)."""
        k = len(self.objects)
        a = int(self.rng.integers(0, k))
        out = []
        for _ in range(length):
            nxt = [b for b in range(k) if self.basis(a, b, lead, trail)[2]]
            if not nxt:
                return None
            b = nxt[int(self.rng.integers(0, len(nxt)))]
            out.append(self.draw(a, b, lead, trail))
            a = b
        return out


def _retry(fn, attempts=50):
    for _ in range(attempts):
        r = fn()
        if r is not None:
            return r
    raise StructuralError("could not draw a composable tuple with nonzero hom spaces")


def interchange_suite(calc: E0Calculus, objects, n: int = 100, rng=None) -> dict:
    """Worst residuals of the 2-category axioms over random composable tuples.

    Patterns are keyed by the three corner letters (outer left, middle, outer
    right), eight in all; each one checks interchange of vertical and
    horizontal composition.  The four corners additionally check
    associativity of vertical composition and the identity law, and the
    sixteen chains of three 1-morphisms check associativity of horizontal
    composition.
    """
    gen = RandomMorphisms(calc, objects, rng)
    out = {"interchange": {}, "vertical_assoc": {}, "vertical_unit": {}, "horizontal_assoc": {}}

    def worst(vals):
        return max(vals) if vals else 0.0

    for l2, mid, t1 in itertools.product((0, 1), repeat=3):
        vals = []
        for _ in range(n):
            def draw():
                a = gen.chain(l2, mid, 2)
                b = gen.chain(mid, t1, 2)
                return None if a is None or b is None else (a, b)
            (s2, t2), (s1, t1m) = _retry(draw)
            lhs = calc.vertical(calc.horizontal(t2, t1m), calc.horizontal(s2, s1))
            rhs = calc.horizontal(calc.vertical(t2, s2), calc.vertical(t1m, s1))
            vals.append(residual(lhs.payload, rhs.payload))
        out["interchange"]["AB"[l2] + "AB"[mid] + "AB"[t1]] = worst(vals)
    for tag in TAGS:
        lead, trail = _lead_trail(tag)
        va, vu = [], []
        for _ in range(n):
            r, s, t = _retry(lambda: gen.chain(lead, trail, 3))
            lhs = calc.vertical(t, calc.vertical(s, r))
            rhs = calc.vertical(calc.vertical(t, s), r)
            va.append(residual(lhs.payload, rhs.payload))
            ida, idb = calc.identity(r.source), calc.identity(r.target)
            vu.append(max(residual(calc.vertical(r, ida).payload, r.payload),
                          residual(calc.vertical(idb, r).payload, r.payload)))
        out["vertical_assoc"][tag] = worst(va)
        out["vertical_unit"][tag] = worst(vu)
    for letters in itertools.product((0, 1), repeat=4):
        vals = []
        for _ in range(max(1, n // 4)):
            def draw():
                ms = [gen.chain(letters[i], letters[i + 1], 1) for i in range(3)]
                return None if any(m is None for m in ms) else [m[0] for m in ms]
            s3, s2, s1 = _retry(draw)
            lhs = calc.horizontal(calc.horizontal(s3, s2), s1)
            rhs = calc.horizontal(s3, calc.horizontal(s2, s1))
            vals.append(residual(lhs.payload, rhs.payload))
        out["horizontal_assoc"]["".join("AB"[x] for x in letters)] = worst(vals)
    fld = calc.fld
    out["passed"] = all(fld.passes(v) for group in out.values() for v in group.values())
    return out


# --------------------------------------------------------------------------
# bimodule realization


@dataclass(eq=False)
class Bimodule:
    X: Representation
    left: str
    right: str
    l: np.ndarray  # L X -> X
    r: np.ndarray  # X R -> X
    name: str = ""

    @property
    def tag(self) -> str:
        return self.right + self.left

    @property
    def dim(self) -> int:
        return self.X.dim

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, {self.left}|{self.X.dim}|{self.right})"


class BimoduleCategory:
    """2-object multi-fusion category of bimodules over {A: 1, B: Q}."""

    def __init__(self, F: FrobeniusData, base: SimpleTable | None = None):
        self.F = F
        self.H = F.Q.H
        self.field = F.field
        self.alg = {"A": trivial_frobenius(self.H), "B": F}
        c = classify(F)
        if not c["canonical"]:
            raise StructuralError("Q is not canonical")
        self.lam = {"A": self.field.one, "B": c["lambda1"]}
        self.lam1, self.lam2 = c["lambda1"], c["lambda2"]
        self.dJ = np.sqrt(complex(self.lam1 * self.lam2))
        self._base = base
        self._tensor_cache = {}
        self._hom_cache = {}
        self.name = "bimodules"

    @property
    def base(self) -> SimpleTable:
        if self._base is None:
            if self.field.exact:
                raise NotImplementedError("corner simples need the complex backend (eigen-splitting)")
            self._base = irreps(self.H)
        return self._base

    # objects
    def unit(self, key: str) -> Bimodule:
        Fk = self.alg[key]
        if key == "A":
            one = trivial_rep(self.H)
            e = self.field.eye(1)
            return Bimodule(one, "A", "A", e.copy(), e.copy(), "1A")
        return Bimodule(Fk.Q, "B", "B", Fk.wprime.copy(), Fk.wprime.copy(), "1B")

    def free(self, X: Representation, left: str, right: str) -> Bimodule:
        fld = self.field
        L, R = self.alg[left], self.alg[right]
        rep = tensor_product(tensor_product(L.Q, X), R.Q)
        il, ix, ir = fld.eye(L.dim), fld.eye(X.dim), fld.eye(R.dim)
        return Bimodule(rep, left, right, kron(L.wprime, ix, ir), kron(il, ix, R.wprime),
                        f"{left}{X.name}{right}")

    def sub(self, x: Bimodule, u, v, name="") -> Bimodule:
        fld = self.field
        L, R = self.alg[x.left], self.alg[x.right]
        rep = subrep(x.X, u, v, name)
        l = v @ x.l @ kron(fld.eye(L.dim), u)
        r = v @ x.r @ kron(u, fld.eye(R.dim))
        return Bimodule(rep, x.left, x.right, l, r, name)

    def validate(self, x: Bimodule) -> dict:
        fld = self.field
        L, R = self.alg[x.left], self.alg[x.right]
        ix = fld.eye(x.dim)
        il, ir = fld.eye(L.dim), fld.eye(R.dim)
        return {
            "left_assoc": residual(x.l @ kron(L.wprime, ix), x.l @ kron(il, x.l)),
            "left_unit": residual(x.l @ kron(L.v, ix), ix),
            "right_assoc": residual(x.r @ kron(ix, R.wprime), x.r @ kron(x.r, ir)),
            "right_unit": residual(x.r @ kron(ix, R.v), ix),
            "commute": residual(x.l @ kron(il, x.r), x.r @ kron(x.l, ir)),
        }

    # morphisms
    def hom(self, x: Bimodule, y: Bimodule) -> list:
        if (x.left, x.right) != (y.left, y.right):
            return []
        key = (id(x), id(y))
        if key in self._hom_cache:
            return self._hom_cache[key][0]
        fld = self.field
        hb = hom_space(x.X, y.X).basis
        if not hb:
            out = []
        else:
            L, R = self.alg[x.left], self.alg[x.right]
            il, ir = fld.eye(L.dim), fld.eye(R.dim)
            cols = []
            for f in hb:
                c1 = f @ x.l - y.l @ kron(il, f)
                c2 = f @ x.r - y.r @ kron(f, ir)
                cols.append(np.concatenate([c1.ravel(), c2.ravel()]))
            ns = fld.nullspace(np.stack(cols, axis=1))
            out = [sum(c * f for c, f in zip(row, hb)) for row in ns]
            if out:
                flat = fld.rowspace(np.stack([o.ravel() for o in out]))
                out = [row.reshape(y.dim, x.dim) for row in flat]
        self._hom_cache[key] = (out, x, y)  # keep x, y alive so ids stay unique
        return out

    # tensor structure
    def _product(self, x: Bimodule, y: Bimodule):
        key = (id(x), id(y))
        if key in self._tensor_cache:
            return self._tensor_cache[key][:3]
        if x.right != y.left:
            raise ValueError(f"cannot tensor {x!r} with {y!r}: middle algebras differ")
        fld = self.field
        M = self.alg[x.right]
        ix, iy = fld.eye(x.dim), fld.eye(y.dim)
        p = kron(x.r, y.l) @ kron(ix, M.w @ M.v, iy) / self.lam[x.right]
        u, v = fld.range_factor(p)
        rep = subrep(tensor_product(x.X, y.X), u, v, f"{x.name}.{y.name}")
        L, R = self.alg[x.left], self.alg[y.right]
        l = v @ kron(x.l, iy) @ kron(fld.eye(L.dim), u)
        r = v @ kron(ix, y.r) @ kron(u, fld.eye(R.dim))
        obj = Bimodule(rep, x.left, y.right, l, r, rep.name)
        self._tensor_cache[key] = (obj, u, v, x, y)
        return obj, u, v

    def tensor(self, x: Bimodule, y: Bimodule) -> Bimodule:
        return self._product(x, y)[0]

    def tensor_mor(self, x, x2, y, y2, f, g):
        _, u, _ = self._product(x, y)
        _, _, v2 = self._product(x2, y2)
        return v2 @ kron(f, g) @ u

    def assoc(self, x, y, z):
        """(xy)z -> x(yz)."""
        xy, u_xy, _ = self._product(x, y)
        _, u_xy_z, _ = self._product(xy, z)
        yz, _, v_yz = self._product(y, z)
        _, _, v_x_yz = self._product(x, yz)
        fld = self.field
        return v_x_yz @ kron(fld.eye(x.dim), v_yz) @ kron(u_xy, fld.eye(z.dim)) @ u_xy_z

    def assoc_inv(self, x, y, z):
        xy, _, v_xy = self._product(x, y)
        _, _, v_xy_z = self._product(xy, z)
        yz, u_yz, _ = self._product(y, z)
        _, u_x_yz, _ = self._product(x, yz)
        fld = self.field
        return v_xy_z @ kron(v_xy, fld.eye(z.dim)) @ kron(fld.eye(x.dim), u_yz) @ u_x_yz

    def right_unitor(self, x: Bimodule):
        """x 1_R -> x."""
        _, u, _ = self._product(x, self.unit(x.right) if x.right == "A" else self._unit_b)
        return x.r @ u

    def left_unitor(self, x: Bimodule):
        """1_L x -> x."""
        _, u, _ = self._product(self.unit(x.left) if x.left == "A" else self._unit_b, x)
        return x.l @ u

    @property
    def _unit_b(self):
        if not hasattr(self, "_ub"):
            self._ub = self.unit("B")
        return self._ub

    def n_sides(self, x: Bimodule) -> int:
        return (x.left == "B") + (x.right == "B")

    def dim(self, x: Bimodule):
        return x.dim / self.dJ ** self.n_sides(x)

    def corner(self, x: Bimodule):
        return (x.left, x.right)

    def unitary(self) -> bool:
        return False

    # simples
    def split(self, x: Bimodule, rng=None) -> list:
        rng = rng or np.random.default_rng(SEED)
        basis = self.hom(x, x)
        if len(basis) == 1:
            return [x]
        z = sum(complex(rng.normal(), rng.normal()) * b for b in basis)
        pieces = []
        for u, v in split_by_endomorphism(x.X, z, self.field):
            if residual(v @ u, self.field.eye(u.shape[1])) > 1e-8:
                raise StructuralError("idempotent splitting is not sound (v u != id)")
            pieces.append(self.sub(x, u, v))
        for p in pieces:
            if len(self.hom(p, p)) != 1:
                raise StructuralError("splitting stalled: piece is not simple")
        return pieces

    def corner_simples(self, tag: str) -> list:
        right, left = tag[0], tag[1]
        found = []
        for X in self.base.simples:
            for piece in self.split(self.free(X, left, right)):
                if not any(self.hom(s, piece) for s in found):
                    found.append(piece)
        for k, s in enumerate(found):
            s.name = f"{tag}{k}"
        # put the unit first on the diagonal
        if left == right:
            u = self.unit(left)
            k0 = next(k for k, s in enumerate(found) if self.hom(u, s))
            found.insert(0, found.pop(k0))
            found[0].name = f"{tag}0"
            for k, s in enumerate(found[1:], start=1):
                s.name = f"{tag}{k}"
        return found

    def decompose(self, x: Bimodule, simples: list) -> list:
        return [len(self.hom(s, x)) for s in simples]


# --------------------------------------------------------------------------
# the context


@dataclass(eq=False)
class MoritaContext:
    F: FrobeniusData
    cat: BimoduleCategory
    e0: E0Calculus
    lam1: complex
    lam2: complex
    dJ: complex
    corners: dict = field(default_factory=dict)
    J: Bimodule | None = None
    Jbar: Bimodule | None = None
    name: str = ""

    @property
    def dJ2(self):
        return self.lam1 * self.lam2

    def corner_dims(self, tag):
        return [self.cat.dim(s) for s in self.corners[tag]]

    def labels(self):
        return [s for tag in TAGS for s in self.corners[tag]]


def build_context(F: FrobeniusData, base: SimpleTable | None = None, name: str = "",
                  corners: bool | None = None) -> MoritaContext:
    """Context of a canonical Frobenius algebra.

    Corner simples need eigen-splitting, so they are skipped by default on
    the exact backend; J, Jbar and everything built from them stay exact.
    """
    cat = BimoduleCategory(F, base)
    e0 = E0Calculus(F)
    ctx = MoritaContext(F, cat, e0, cat.lam1, cat.lam2, cat.dJ, name=name or F.name)
    if corners is None:
        corners = not F.field.exact
    if corners:
        for tag in TAGS:
            ctx.corners[tag] = cat.corner_simples(tag)
    fld = F.field
    iq = fld.eye(F.dim)
    ctx.J = Bimodule(F.Q, "A", "B", iq.copy(), F.wprime.copy(), "J")
    ctx.Jbar = Bimodule(F.Q, "B", "A", F.wprime.copy(), iq.copy(), "Jbar")
    return ctx


def corner_simples(F: FrobeniusData, base: SimpleTable | None = None) -> MoritaContext:
    return build_context(F, base)


def e0_corner_summary(ctx: MoritaContext) -> dict:
    """Corner simples and dims computed inside E0 (independent of bimodules)."""
    out = {}
    simples = ctx.cat.base.simples
    for tag in TAGS:
        found = ctx.e0.corner_simples(tag, simples)
        out[tag] = sorted(complex(ctx.e0.trace(w, p)).real for w, p in found)
    return out


def induction_matrix(ctx: MoritaContext) -> dict:
    """N[i][k] = dim Hom(Y_k, X_i J) for A-simples X_i and BA-simples Y_k."""
    cat = ctx.cat
    xs = ctx.corners["AA"]
    ys = ctx.corners["BA"]
    nmat = [[len(cat.hom(y, cat.tensor(x, ctx.J))) for y in ys] for x in xs]
    lhs = sum(cat.dim(x) * cat.dim(cat.tensor(x, ctx.J)) for x in xs)
    rhs = sum(cat.dim(y) * cat.dim(cat.tensor(y, ctx.Jbar)) for y in ys)
    return {"N": nmat, "balance_lhs": complex(lhs), "balance_rhs": complex(rhs),
            "balance_residual": abs(complex(lhs) - complex(rhs))}


def global_dims(ctx: MoritaContext) -> dict:
    return {tag: complex(sum(ctx.cat.dim(s) ** 2 for s in ctx.corners[tag])) for tag in TAGS}


def dimension_balance(ctx: MoritaContext, tol: float = 1e-9) -> dict:
    dims = global_dims(ctx)
    vals = list(dims.values())
    spread = max(abs(a - b) for a in vals for b in vals)
    dj2 = abs(ctx.dJ ** 2 - complex(ctx.lam1 * ctx.lam2))
    return {"dims": dims, "spread": spread, "dJ2_residual": dj2,
            "passed": spread <= tol * max(1.0, abs(vals[0])) and dj2 <= tol}


def depth_profile(ctx: MoritaContext) -> dict:
    cat = ctx.cat
    irreducible = len(cat.hom(ctx.J, ctx.J)) == 1
    jjj = cat.tensor(cat.tensor(ctx.J, ctx.Jbar), ctx.J)
    if "BA" in ctx.corners:
        ys = ctx.corners["BA"]
        mult = cat.decompose(jjj, ys)
        supp_j = [k for k, m in enumerate(cat.decompose(ctx.J, ys)) if m]
        supp = [k for k, m in enumerate(mult) if m]
        return {"depth_two": set(supp) <= set(supp_j), "irreducible": irreducible,
                "JJbarJ": mult, "J": cat.decompose(ctx.J, ys)}
    if not irreducible:
        raise NotImplementedError("depth of a reducible J needs the corner simples")
    # J simple: J Jbar J = n J + rest, and dim End = n^2 exactly when rest = 0
    n = len(cat.hom(ctx.J, jjj))
    return {"depth_two": len(cat.hom(jjj, jjj)) == n * n, "irreducible": True,
            "JJbarJ": [n], "J": [1]}


# --------------------------------------------------------------------------
# Hopf reconstruction


@dataclass
class Reconstruction:
    """Fourier maps are stored divided by d(J) so that exact runs stay rational."""
    A: StructuredBialgebra
    B: StructuredBialgebra
    fourier0: np.ndarray  # F / d(J), A -> B in the chosen bases
    fourier_hat0: np.ndarray  # Fhat / d(J), B -> A
    pairing: np.ndarray  # <a_i, b_j>
    dJ2: object
    report: dict

    @property
    def fourier(self):
        return np.sqrt(complex(self.dJ2)) * self.fourier0.astype(complex)

    @property
    def fourier_hat(self):
        return np.sqrt(complex(self.dJ2)) * self.fourier_hat0.astype(complex)


def _algebra_from_basis(fld, basis, name):
    """Structure constants of the span of a multiplicatively closed set of matrices."""
    flat = np.stack([b.ravel() for b in basis], axis=1)
    n = len(basis)
    m = fld.zeros((n, n, n))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            m[i, j], _ = fld.lstsq(flat, (bi @ bj).ravel())
    unit, _ = fld.lstsq(flat, fld.eye(basis[0].shape[0]).ravel())
    return flat, m, unit


def reconstruct_hopf(ctx: MoritaContext) -> Reconstruction:
    prof = depth_profile(ctx)
    if not prof["irreducible"]:
        raise StructuralError("reconstruction needs an irreducible context (J not simple)")
    if not prof["depth_two"]:
        raise StructuralError("reconstruction needs a depth-two context")
    cat, fld, F = ctx.cat, ctx.cat.field, ctx.F
    q = F.dim
    iq = fld.eye(q)
    lam1, lam2 = ctx.lam1, ctx.lam2
    dj2 = lam1 * lam2
    # duality maps: e_J = w v, d_J = w'/lam1, eta_J = beta v'w', eps_J = gamma w with
    # beta = d(J)/(lam1 lam2) and gamma = d(J); the common d(J) is divided out here
    beta = 1 / dj2
    gamma = fld.one
    delta = 1 / lam1
    jjb, u_p, v_p = cat._product(ctx.J, ctx.Jbar)  # J Jbar = image of P in Q Q
    jbj = cat.tensor(ctx.Jbar, ctx.J)  # Jbar J = Q Q
    a_basis = cat.hom(jjb, jjb)
    b_basis = cat.hom(jbj, jbj)
    if len(a_basis) != len(b_basis):
        raise StructuralError("End(J Jbar) and End(Jbar J) have different dimensions")
    n = len(a_basis)
    a_flat, am, aunit = _algebra_from_basis(fld, a_basis, "A")
    b_flat, bm, bunit = _algebra_from_basis(fld, b_basis, "B")

    # Fourier transform A -> B: (id d_J)(id a id)(eps_J id), where
    # Jbar -> (Jbar J) Jbar is (gamma/lam1)(w id) w on the underlying objects
    wide = (gamma / lam1) * kron(F.w, iq) @ F.w  # Q -> Q Q Q
    close = delta * F.wprime

    def fourier(a):
        at = u_p @ a @ v_p  # on Q Q
        m = kron(wide, iq)  # Q Q -> Q Q Q Q
        m = kron(iq, at, iq) @ m
        m = kron(iq, iq, close) @ m
        return kron(iq, F.wprime) @ m  # right unitor of Jbar J

    def fourier_hat(b):
        m = kron(F.w @ F.v, u_p)  # J Jbar -> Q Q Q Q
        m = kron(iq, b, iq) @ m
        m = kron(iq, iq, beta * (F.vprime @ F.wprime)) @ m
        return v_p @ m

    fmat = np.stack([fld.lstsq(b_flat, fourier(a).ravel())[0] for a in a_basis], axis=1)
    fhat = np.stack([fld.lstsq(a_flat, fourier_hat(b).ravel())[0] for b in b_basis], axis=1)
    rep = {}
    rep["fourier_in_B"] = max(residual(b_flat @ fmat[:, i], fourier(a).ravel())
                              for i, a in enumerate(a_basis))
    rep["fourier_hat_in_A"] = max(residual(a_flat @ fhat[:, j], fourier_hat(b).ravel())
                                  for j, b in enumerate(b_basis))
    s_a = dj2 * (fhat @ fmat)
    s_b = dj2 * (fmat @ fhat)
    finv = fld.inv(fmat)
    # pairing <a_i, b_j> = d(J)^-1 Tr(a_i F^-1(b_j)) = d(J)^-2 Tr(a_i F0^-1(b_j))
    pm = fld.zeros((n, n))
    for i, a in enumerate(a_basis):
        for j in range(n):
            fa = sum(finv[k, j] * a_basis[k] for k in range(n))
            pm[i, j] = np.trace(a @ fa) / dj2
    pinv = fld.inv(pm)
    # <Delta a_i, b_r b_s> = <a_i, b_r b_s>
    delta_a = ein("rst,it,rp,sq->ipq", bm, pm, pinv.T, pinv.T)
    eps_a = pm @ bunit
    delta_b = ein("pqt,tj,pr,qs->jrs", am, pm, pinv, pinv)
    eps_b = aunit @ pm
    A = StructuredBialgebra(fld, n, am, aunit, delta_a, eps_a, s_a, "A")
    B = StructuredBialgebra(fld, n, bm, bunit, delta_b, eps_b, s_b, "B")
    rep["A"] = validate_hopf(A).as_dict()
    rep["B"] = validate_hopf(B).as_dict()
    rep["S_involutive"] = max(residual(s_a @ s_a, fld.eye(n)), residual(s_b @ s_b, fld.eye(n)))
    rep["S_antimultiplicative"] = residual(
        ein("ijk,lk->ijl", am, s_a), ein("jb,ia,bac->ijc", s_a, s_a, am))
    rep["pairing_rank"] = fld.rank(pm)
    rep["pairing_symmetry"] = residual(pm @ fmat, (pm @ fmat).T)
    rep["convolution"] = convolution_residual(am, fmat, bm, finv)
    rep["weyl"] = weyl_residual(ctx, a_basis, b_basis, u_p, v_p, delta_a, delta_b, pm)
    rep["eps_one"] = residual(eps_a @ aunit, fld.one)
    return Reconstruction(A, B, fmat, fhat, pm, dj2, rep)


def convolution_residual(am, fmat, bm, finv):
    """F(a * b) = F(a) F(b) where a * b = F^-1(F(a) F(b)), using the basis tables.

    Checks that the convolution defined through F is associative with unit
    F^-1(1_B), i.e. that F carries it to a genuine algebra structure.
    """
    conv = ein("ip,jq,pqr,kr->ijk", fmat.T, fmat.T, bm, finv)
    lhs = ein("ijx,xkl->ijkl", conv, conv)
    rhs = ein("jkx,ixl->ijkl", conv, conv)
    back = ein("ijk,lk->ijl", conv, fmat)
    direct = ein("ip,jq,pql->ijl", fmat.T, fmat.T, bm)
    return max(residual(lhs, rhs), residual(back, direct))


def weyl_residual(ctx, a_basis, b_basis, u_p, v_p, delta_a, delta_b, pm):
    """Phi1(a b) = <a_(2), b_(1)> Phi2(a_(1) b_(2)) on Q Q Q for all basis pairs."""
    fld = ctx.cat.field
    iq = fld.eye(ctx.F.dim)
    lift = [u_p @ a @ v_p for a in a_basis]

    def phi1(a, b):
        return kron(iq, b) @ kron(a, iq)

    def phi2(a, b):
        return kron(a, iq) @ kron(iq, b)

    n = len(a_basis)
    worst = 0
    coef = ein("ipq,jrs,qr->ijps", delta_a, delta_b, pm)
    for i in range(n):
        for j in range(n):
            lhs = phi1(lift[i], b_basis[j])
            rhs = sum(coef[i, j, p, s] * phi2(lift[p], b_basis[s])
                      for p in range(n) for s in range(n) if not fld.is_zero(coef[i, j, p, s]))
            worst = max(worst, residual(lhs, rhs))
    return worst


def compare_commutative(A: StructuredBialgebra, H: StructuredBialgebra, tol: float = 1e-8) -> dict:
    """Search a Hopf isomorphism A -> H for commutative split algebras.

    Both sides are rewritten in their bases of primitive idempotents; the
    isomorphism is then a permutation, found by exhaustive search.
    """
    if A.field.exact:
        A = A.with_field(COMPLEX_FIELD)
    if H.field.exact:
        H = H.with_field(COMPLEX_FIELD)
    ea = _idempotent_basis(A)
    eh = _idempotent_basis(H)
    if ea is None or eh is None or ea[0].shape != eh[0].shape:
        return {"matched": False, "reason": "not commutative and split"}
    da, ca = ea[1], ea[2]
    dh, ch = eh[1], eh[2]
    n = A.n
    for perm in itertools.permutations(range(n)):
        p = list(perm)
        if np.max(np.abs(ca - ch[p])) > tol:
            continue
        if np.max(np.abs(da - dh[np.ix_(p, p, p)])) < tol:
            return {"matched": True, "permutation": p}
    return {"matched": False, "reason": "no idempotent permutation matches"}


def _idempotent_basis(H: StructuredBialgebra):
    """(basis change, Delta, counit) in the primitive idempotent basis."""
    m = H.m
    comm = np.max(np.abs(m - np.transpose(m, (1, 0, 2))))
    if comm > 1e-8:
        return None
    rng = np.random.default_rng(SEED)
    z = rng.normal(size=H.n)
    lz = H.left_mult(z.astype(complex))
    vals, vecs = np.linalg.eig(lz)
    # eigenvectors are multiples of the idempotents; fix scale by e^2 = e
    idem = []
    for k in range(H.n):
        e = vecs[:, k]
        sq = H.mul(e, e)
        j = int(np.argmax(np.abs(e)))
        c = sq[j] / e[j]
        idem.append(e / c)
    pmat = np.stack(idem, axis=1)  # columns: idempotents in old coordinates
    pinv = np.linalg.inv(pmat)
    delta = np.einsum("ia,ijk,bj,ck->abc", pmat, H.delta, pinv, pinv)
    counit = H.counit @ pmat
    return pmat, delta, counit


def co_opposite(H: StructuredBialgebra) -> StructuredBialgebra:
    return StructuredBialgebra(H.field, H.n, H.m, H.unit, np.transpose(H.delta, (0, 2, 1)).copy(),
                               H.counit, H.antipode, H.name + "^cop", H.group, H.kind)


# --------------------------------------------------------------------------
# reports


def context_report(ctx: MoritaContext, with_skeletal: bool = True) -> dict:
    bal = dimension_balance(ctx)
    prof = depth_profile(ctx)
    ind = induction_matrix(ctx)
    rep = {
        "lambda1": complex(ctx.lam1).real,
        "lambda2": complex(ctx.lam2).real,
        "dJ2": complex(ctx.dJ2).real,
        "corners": {tag: {"simples": [{"dim": s.dim, "d": complex(ctx.cat.dim(s)).real}
                                      for s in ctx.corners[tag]],
                          "global_dim": bal["dims"][tag].real} for tag in TAGS},
        "N": ind["N"],
        "depth_two": prof["depth_two"],
        "irreducible": prof["irreducible"],
    }
    if with_skeletal:
        from .skeletal import context_skeletal, skeletal_to_json
        rep["skeletal"] = skeletal_to_json(context_skeletal(ctx))
    return rep


def save_context(ctx: MoritaContext, path):
    with open(path, "w") as fh:
        json.dump(context_report(ctx), fh, indent=1)
