"""Rep(H) as a concrete semisimple spherical category.

Morphisms X -> Y are (dim Y x dim X) matrices; vectors 1 -> X are columns
and covectors X -> 1 are rows.  Tensor products of spaces are Kronecker
products with row-major index order, so ``kron(f, g)`` is ``f (x) g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hopf import StructuredBialgebra, antipode_square_residual, haar_integral
from .numerics import COMPLEX_FIELD, Field, StructuralError, ein, kron, residual

SEED = 20240611
# switch from the stacked commutation system to Haar averaging above this
# many unknowns
SYSTEM_LIMIT = 400


@dataclass(eq=False)
class Representation:
    H: StructuredBialgebra
    mats: np.ndarray  # (n, dim, dim): rho(b_i)
    name: str = ""

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    @property
    def field(self) -> Field:
        return self.H.field

    def act(self, a):
        """rho(a) for a coordinate vector a."""
        return ein("i,ijk->jk", a, self.mats)

    def validate(self):
        H = self.H
        prod = ein("iab,jbc->ijac", self.mats, self.mats)
        lin = ein("ijk,kac->ijac", H.m, self.mats)
        res_m = residual(prod, lin)
        res_u = residual(self.act(H.unit), self.field.eye(self.dim))
        return {"multiplicativity": res_m, "unit": res_u}

    def __repr__(self):
        return f"Representation({self.name or '?'}, dim={self.dim})"


def trivial_rep(H: StructuredBialgebra) -> Representation:
    return Representation(H, H.counit.reshape(H.n, 1, 1).copy(), "1")


def regular_rep(H: StructuredBialgebra) -> Representation:
    mats = np.stack([H.left_mult(H.basis(i)) for i in range(H.n)])
    return Representation(H, mats, "regular")


def tensor_product(X: Representation, Y: Representation) -> Representation:
    H = X.H
    if Y.H is not H:
        raise ValueError("representations of different algebras")
    # rho(b_i) = sum_jk delta[i,j,k] rho_X(b_j) (x) rho_Y(b_k)
    mats = ein("ijk,jab,kcd->iacbd", H.delta, X.mats, Y.mats)
    mats = mats.reshape(H.n, X.dim * Y.dim, X.dim * Y.dim)
    return Representation(H, mats, f"({X.name}{Y.name})")


def direct_sum(*reps: Representation) -> Representation:
    H = reps[0].H
    fld = H.field
    dim = sum(r.dim for r in reps)
    mats = fld.zeros((H.n, dim, dim))
    o = 0
    for r in reps:
        mats[:, o:o + r.dim, o:o + r.dim] = r.mats
        o += r.dim
    return Representation(H, mats, "+".join(r.name for r in reps))


def subrep(X: Representation, u, v, name: str = "") -> Representation:
    """Subobject with section u (X.dim x k) and retraction v (k x X.dim)."""
    mats = np.stack([v @ X.mats[i] @ u for i in range(X.H.n)])
    return Representation(X.H, mats, name)


def dual_rep(X: Representation) -> Representation:
    """X-bar on the dual space: b acts by rho(S b)^T."""
    s = X.H.antipode
    mats = ein("ji,jab->iba", s, X.mats)
    return Representation(X.H, mats, X.name + "*")


# --------------------------------------------------------------------------
# hom spaces


@dataclass
class HomBasis:
    source: Representation
    target: Representation
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, t):
        """Coordinates of an intertwiner t in this basis."""
        fld = self.source.field
        if not self.basis:
            return fld.zeros(0)
        a = np.stack([b.ravel() for b in self.basis], axis=1)
        x, res = fld.lstsq(a, fld.array(t).ravel())
        return x


def _haar_terms(H: StructuredBialgebra):
    if "haar_terms" not in H._cache:
        lam = haar_integral(H)
        c = H.coproduct(lam)
        fld = H.field
        terms = [(j, k, c[j, k]) for j in range(H.n) for k in range(H.n) if not fld.is_zero(c[j, k])]
        H._cache["haar_terms"] = terms
    return H._cache["haar_terms"]


def _antipode_images(X: Representation):
    key = "_s_images"
    if not hasattr(X, key):
        # rho_X(S b_k) for all k
        setattr(X, key, ein("ik,iab->kab", X.H.antipode, X.mats))
    return getattr(X, key)


def haar_project(X: Representation, Y: Representation, t):
    """Average t: X -> Y over H; lands in Hom_H(X, Y)."""
    sx = _antipode_images(X)
    out = None
    for j, k, c in _haar_terms(X.H):
        term = c * (Y.mats[j] @ t @ sx[k])
        out = term if out is None else out + term
    return out


def hom_dim(X: Representation, Y: Representation) -> int:
    """dim Hom_H(X, Y) by the character formula of the Haar projection."""
    sx = _antipode_images(X)
    tot = sum(c * np.trace(Y.mats[j]) * np.trace(sx[k]) for j, k, c in _haar_terms(X.H))
    if X.field.exact:
        return int(tot)
    val = complex(tot)
    k = int(round(val.real))
    if abs(val - k) > 1e-6:
        raise StructuralError(f"hom dimension trace {val} is not an integer")
    return k


def _system_hom(X: Representation, Y: Representation):
    fld = X.field
    m, n = Y.dim, X.dim
    eye_m, eye_n = fld.eye(m), fld.eye(n)
    rows = []
    for i in range(X.H.n):
        # vec(T rho_X) - vec(rho_Y T), row-major vec
        rows.append(kron(eye_m, X.mats[i].T) - kron(Y.mats[i], eye_n))
    ns = fld.nullspace(np.concatenate(rows, axis=0))
    return [row.reshape(m, n) for row in ns]


def _haar_hom(X: Representation, Y: Representation):
    fld = X.field
    k = hom_dim(X, Y)
    if k == 0:
        return []
    rng = np.random.default_rng(SEED)
    probes = []
    for attempt in range(4):
        for _ in range(k + 3):
            r = rng.integers(-3, 4, size=(Y.dim, X.dim))
            if not fld.exact:
                r = r + 1j * rng.integers(-3, 4, size=(Y.dim, X.dim))
            probes.append(haar_project(X, Y, fld.array(r)).ravel())
        rows = fld.rowspace(np.stack(probes))
        if rows.shape[0] == k:
            return [row.reshape(Y.dim, X.dim) for row in rows]
    raise StructuralError(f"Haar probing found {rows.shape[0]} of {k} intertwiners")


def hom_space(X: Representation, Y: Representation) -> HomBasis:
    """Basis of Hom_H(X, Y) in reduced echelon form."""
    if X.H is not Y.H:
        raise ValueError("representations of different algebras")
    if X.dim * Y.dim <= SYSTEM_LIMIT:
        basis = _system_hom(X, Y)
    else:
        basis = _haar_hom(X, Y)
    return HomBasis(X, Y, basis)


def is_intertwiner(X: Representation, Y: Representation, t) -> bool:
    t = X.field.array(t)
    lhs = ein("ab,ibc->iac", t, X.mats)
    rhs = ein("iab,bc->iac", Y.mats, t)
    return X.field.close(lhs, rhs, scale=1.0 + float(abs(residual(t))))


def intertwiner_residual(X: Representation, Y: Representation, t):
    t = X.field.array(t)
    return residual(ein("ab,ibc->iac", t, X.mats), ein("iab,bc->iac", Y.mats, t))


def isomorphic(X: Representation, Y: Representation) -> bool:
    if X.dim != Y.dim:
        return False
    hb = hom_space(X, Y)
    if not hb.basis:
        return False
    rng = np.random.default_rng(SEED)
    if X.field.exact:
        t = sum(X.field.scalar(int(rng.integers(1, 9))) * b for b in hb.basis)
    else:
        t = sum(complex(rng.normal(), rng.normal()) * b for b in hb.basis)
    return X.field.rank(t) == X.dim


# --------------------------------------------------------------------------
# simples


def unitarize(X: Representation) -> Representation:
    """Conjugate a rep of a group or function algebra to a unitary one.

    Uses the positive form M = sum_i rho(b_i)^dagger rho(b_i), which is
    invariant for group elements and for the delta-function basis.
    """
    if X.field.exact or X.H.kind not in ("group-algebra", "function-algebra"):
        return X
    mmat = sum(a.conj().T @ a for a in X.mats)
    c = np.linalg.cholesky(mmat).conj().T  # M = c^dagger c
    ci = np.linalg.inv(c)
    mats = np.stack([c @ a @ ci for a in X.mats])
    return Representation(X.H, mats, X.name)


@dataclass
class SimpleTable:
    H: StructuredBialgebra
    simples: list
    regular_multiplicity: list = field(default_factory=list)

    def __len__(self):
        return len(self.simples)

    @property
    def dims(self):
        return [x.dim for x in self.simples]


def split_by_endomorphism(X: Representation, z, fld: Field):
    """Eigenspaces of an endomorphism z of X as (u, v) section/retraction pairs."""
    vals, vecs = np.linalg.eig(np.asarray(z, dtype=complex))
    clusters = []
    for i, lam in enumerate(vals):
        for c in clusters:
            if abs(c[0] - lam) < 1e-6 * max(1.0, abs(lam)):
                c[1].append(i)
                break
        else:
            clusters.append([lam, [i]])
    # projections along the other eigenspaces come from the inverse eigenbasis
    vinv = np.linalg.inv(vecs)
    return [(vecs[:, idx], vinv[idx]) for _, idx in clusters]


def irreps(H: StructuredBialgebra, unitary: bool = True) -> SimpleTable:
    """All simple H-modules, trivial first, by splitting the regular module.

    A generic right multiplication R_a commutes with the left regular action;
    for semisimple H its eigenspaces are simple left ideals.
    """
    fld = H.field
    if fld.exact:
        raise NotImplementedError("simple decomposition needs the complex backend")
    if fld.is_zero(find_eps_lambda(H)):
        raise StructuralError("H is not semisimple")
    reg = regular_rep(H)
    rng = np.random.default_rng(SEED)
    a = rng.normal(size=H.n) + 1j * rng.normal(size=H.n)
    z = H.right_mult(a)
    pieces = [subrep(reg, u, v) for u, v in split_by_endomorphism(reg, z, fld)]
    simples, mult = [], []
    for p in pieces:
        if hom_dim(p, p) != 1:
            raise StructuralError("eigenspace splitting stalled (non-generic element)")
        for k, s in enumerate(simples):
            if s.dim == p.dim and hom_dim(s, p) == 1:
                mult[k] += 1
                break
        else:
            simples.append(p)
            mult.append(1)
    triv = trivial_rep(H)
    k0 = next(k for k, s in enumerate(simples) if s.dim == 1 and hom_dim(triv, s) == 1)
    order = [k0] + [k for k in range(len(simples)) if k != k0]
    rest = sorted(order[1:], key=lambda k: simples[k].dim)
    order = [k0] + rest
    out = []
    for pos, k in enumerate(order):
        s = triv if pos == 0 else simples[k]
        if unitary:
            s = unitarize(s)
        s.name = "1" if pos == 0 else f"X{pos}"
        out.append(s)
    table = SimpleTable(H, out, [mult[k] for k in order])
    if sum(m * s.dim for m, s in zip(table.regular_multiplicity, out)) != H.n:
        raise StructuralError("regular representation not exhausted")
    return table


def find_eps_lambda(H):
    from .hopf import find_integrals
    return find_integrals(H).eps_Lambda(H)


@dataclass
class Decomposition:
    multiplicities: list
    injections: list  # per simple, list of (dim X x dim X_i) matrices
    projections: list  # per simple, list of (dim X_i x dim X) matrices


def decompose(X: Representation, table: SimpleTable) -> Decomposition:
    fld = X.field
    inj = [hom_space(s, X).basis for s in table.simples]
    mult = [len(b) for b in inj]
    total = sum(m * s.dim for m, s in zip(mult, table.simples))
    if total != X.dim:
        raise StructuralError(f"multiplicities account for {total} of {X.dim} dimensions")
    cols = [b for bs in inj for b in bs]
    if not cols:
        return Decomposition(mult, inj, [[] for _ in inj])
    u = np.concatenate(cols, axis=1)
    uinv = fld.inv(u)
    proj, o = [], 0
    for bs in inj:
        row = []
        for b in bs:
            row.append(uinv[o:o + b.shape[1]])
            o += b.shape[1]
        proj.append(row)
    return Decomposition(mult, inj, proj)


# --------------------------------------------------------------------------
# duality, traces, dimensions


@dataclass
class DualityPack:
    X: Representation
    Xbar: Representation
    e: np.ndarray  # 1 -> X Xbar, column
    d: np.ndarray  # Xbar X -> 1, row
    eps: np.ndarray  # 1 -> Xbar X, column
    eta: np.ndarray  # X Xbar -> 1, row
    residuals: dict


def duality_pack(X: Representation) -> DualityPack:
    H, fld = X.H, X.field
    res_s2 = antipode_square_residual(H)
    if not fld.passes(res_s2):
        raise ValueError(f"S^2 != id (residual {float(res_s2):.3g}); duality pack unsupported")
    xb = dual_rep(X)
    n = X.dim
    idv = fld.eye(n).reshape(n * n, 1)
    e, eps = idv.copy(), idv.copy()
    d, eta = idv.T.copy(), idv.T.copy()
    one = fld.eye(1)
    triv = trivial_rep(H)
    xxb, xbx = tensor_product(X, xb), tensor_product(xb, X)
    idx, idxb = fld.eye(n), fld.eye(n)
    res = {
        "intertwiners": max(intertwiner_residual(triv, xxb, e), intertwiner_residual(xbx, triv, d),
                            intertwiner_residual(triv, xbx, eps), intertwiner_residual(xxb, triv, eta)),
        # (id_X d)(e id_X) = id_X and (d id_Xbar)(id_Xbar e) = id_Xbar
        "triangle_e_d": max(residual(kron(idx, d) @ kron(e, idx), idx),
                            residual(kron(d, idxb) @ kron(idxb, e), idxb)),
        # (eta id_X)(id_X eps) = id_X and (id_Xbar eta)(eps id_Xbar) = id_Xbar
        "triangle_eps_eta": max(residual(kron(eta, idx) @ kron(idx, eps), idx),
                                residual(kron(idxb, eta) @ kron(eps, idxb), idxb)),
        "balanced": residual((eta @ e) - (d @ eps), one * 0),
    }
    return DualityPack(X, xb, e, d, eps, eta, res)


def trace_and_dim(pack: DualityPack, f=None) -> dict:
    X, fld = pack.X, pack.X.field
    n = X.dim
    f = fld.eye(n) if f is None else fld.array(f)
    trl = (pack.d @ kron(fld.eye(n), f) @ pack.eps)[0, 0]
    trr = (pack.eta @ kron(f, fld.eye(n)) @ pack.e)[0, 0]
    dimv = (pack.d @ pack.eps)[0, 0]
    d2 = (pack.eta @ pack.e)[0, 0] * (pack.d @ pack.eps)[0, 0]
    if not fld.eq(trl, trr):
        raise StructuralError(f"left and right traces differ: {trl} vs {trr}")
    if not fld.eq(d2, dimv * dimv):
        raise StructuralError("d^2 differs from the square of d")
    return {"trL": trl, "trR": trr, "d": dimv, "d2": d2}


def global_dimension(table: SimpleTable):
    fld = table.H.field
    return sum((trace_and_dim(duality_pack(s))["d2"] for s in table.simples), fld.zero)


# --------------------------------------------------------------------------
# concrete category protocol used by skeletal extraction


class RepCategory:
    """Rep(H) with strict (identity) associator."""

    def __init__(self, H: StructuredBialgebra, table: SimpleTable | None = None, name: str = ""):
        self.H = H
        self.table = table or irreps(H)
        self.name = name or f"Rep({H.name})"
        self.field = H.field

    def simples(self):
        return list(self.table.simples)

    def labels(self):
        return [s.name for s in self.table.simples]

    def hom(self, x, y):
        return hom_space(x, y).basis

    def tensor(self, x, y):
        return tensor_product(x, y)

    def tensor_mor(self, x, x2, y, y2, f, g):
        return kron(f, g)

    def assoc(self, x, y, z):
        return self.field.eye(x.dim * y.dim * z.dim)

    def assoc_inv(self, x, y, z):
        return self.field.eye(x.dim * y.dim * z.dim)

    def dim(self, x):
        return x.dim

    def corner(self, x):
        return ("A", "A")

    def unit(self, key="A"):
        return trivial_rep(self.H)

    def unitary(self) -> bool:
        return self.H.kind in ("group-algebra", "function-algebra") and not self.field.exact


def rep_category(name: str) -> RepCategory:
    from .hopf import named_hopf
    return RepCategory(named_hopf(name, COMPLEX_FIELD))
