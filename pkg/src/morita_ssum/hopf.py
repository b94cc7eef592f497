"""Finite-dimensional Hopf algebras given by structure tensors.

Conventions. A basis b_0..b_{n-1} is fixed.

* ``m[i, j, k]``: coefficient of b_k in b_i b_j.
* ``delta[i, j, k]``: coefficient of b_j (x) b_k in Delta(b_i).
* ``antipode[i, j]``: coefficient of b_i in S(b_j), so S acts on coordinate
  columns by matrix multiplication.

Linear forms are coordinate row vectors, elements are coordinate vectors.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .numerics import (
    COMPLEX_FIELD,
    EXACT_FIELD,
    Field,
    StructuralError,
    ein,
    residual,
    scalar_from_json,
    scalar_to_json,
)

MAX_GROUP_ORDER = 24


# --------------------------------------------------------------------------
# groups


def _closure(gens, mul, identity):
    elems = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul(a, g)
                if b not in seen:
                    seen.add(b)
                    elems.append(b)
                    nxt.append(b)
        frontier = nxt
    return elems


def _table(elems, mul):
    index = {e: i for i, e in enumerate(elems)}
    return [[index[mul(a, b)] for b in elems] for a in elems]


def _perm_mul(p, q):
    # (p*q)(x) = p(q(x))
    return tuple(p[q[i]] for i in range(len(q)))


def cyclic_table(n: int):
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def _perm_group(gens):
    ident = tuple(range(len(gens[0])))
    return _table(_closure(gens, _perm_mul, ident), _perm_mul)


def _quaternion_table():
    # elements as (sign, unit) with unit in 1,i,j,k
    mult = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }

    def mul(a, b):
        s, u = mult[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return _table(_closure([(1, "i"), (1, "j")], mul, (1, "1")), mul)


def bundled_groups() -> dict:
    return {
        "Z2": cyclic_table(2),
        "Z3": cyclic_table(3),
        "Z4": cyclic_table(4),
        "Z2xZ2": _table(
            _closure([(1, 0), (0, 1)], lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2), (0, 0)),
            lambda a, b: ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2),
        ),
        "S3": _perm_group([(1, 0, 2), (1, 2, 0)]),
        "D4": _perm_group([(1, 2, 3, 0), (3, 2, 1, 0)]),
        "Q8": _quaternion_table(),
    }


def group_table(name: str):
    groups = bundled_groups()
    if name not in groups:
        raise KeyError(f"unknown group {name!r}; bundled: {sorted(groups)}")
    return groups[name]


@dataclass(frozen=True)
class GroupInfo:
    table: tuple
    identity: int
    inverse: tuple

    @property
    def order(self) -> int:
        return len(self.table)


def check_group(table, bound: int = MAX_GROUP_ORDER) -> GroupInfo:
    n = len(table)
    if n == 0 or n > bound:
        raise ValueError(f"group order {n} outside 1..{bound}")
    if any(len(row) != n or any(not 0 <= x < n for x in row) for row in table):
        raise ValueError("multiplication table is not an n x n table of indices")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise ValueError(f"table is not associative at ({a}, {b}, {c})")
    ids = [e for e in range(n) if all(table[e][g] == g == table[g][e] for g in range(n))]
    if not ids:
        raise ValueError("table has no identity")
    e = ids[0]
    inv = []
    for g in range(n):
        hs = [h for h in range(n) if table[g][h] == e]
        if not hs:
            raise ValueError(f"element {g} has no inverse")
        inv.append(hs[0])
    return GroupInfo(tuple(tuple(r) for r in table), e, tuple(inv))


# --------------------------------------------------------------------------
# structure tensors


@dataclass(eq=False)
class StructuredBialgebra:
    field: Field
    n: int
    m: np.ndarray
    unit: np.ndarray
    delta: np.ndarray | None = None
    counit: np.ndarray | None = None
    antipode: np.ndarray | None = None
    name: str = ""
    group: GroupInfo | None = None
    kind: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def is_hopf(self) -> bool:
        return self.delta is not None and self.counit is not None and self.antipode is not None

    # basic operations on coordinate vectors
    def mul(self, a, b):
        return ein("i,j,ijk->k", a, b, self.m)

    def left_mult(self, a):
        """Matrix of x -> a x."""
        return ein("i,ijk->kj", a, self.m)

    def right_mult(self, a):
        """Matrix of x -> x a."""
        return ein("j,ijk->ki", a, self.m)

    def basis(self, i):
        v = self.field.zeros(self.n)
        v[i] = self.field.one
        return v

    def coproduct(self, a):
        return ein("i,ijk->jk", a, self.delta)

    def with_field(self, fld: Field) -> "StructuredBialgebra":
        conv = (lambda a: None if a is None else fld.array(a))
        return StructuredBialgebra(
            fld, self.n, conv(self.m), conv(self.unit), conv(self.delta),
            conv(self.counit), conv(self.antipode), self.name, self.group, self.kind,
        )


def group_hopf(kind: str, table, fld: Field = EXACT_FIELD, name: str = "",
               bound: int = MAX_GROUP_ORDER) -> StructuredBialgebra:
    """F(G) (``function-algebra``) or the group algebra (``group-algebra``)."""
    info = check_group(table, bound)
    n = info.order
    t = info.table
    m = fld.zeros((n, n, n))
    delta = fld.zeros((n, n, n))
    s = fld.zeros((n, n))
    one = fld.one
    if kind == "function-algebra":
        unit = fld.array([1] * n)
        counit = fld.zeros(n)
        counit[info.identity] = one
        for g in range(n):
            m[g, g, g] = one
            s[info.inverse[g], g] = one
            for h in range(n):
                delta[t[g][h], g, h] = one
        label = name or "F(G)"
    elif kind == "group-algebra":
        unit = fld.zeros(n)
        unit[info.identity] = one
        counit = fld.array([1] * n)
        for g in range(n):
            delta[g, g, g] = one
            s[info.inverse[g], g] = one
            for h in range(n):
                m[g, h, t[g][h]] = one
        label = name or "kG"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return StructuredBialgebra(fld, n, m, unit, delta, counit, s, label, info, kind)


def named_hopf(spec: str, fld: Field = EXACT_FIELD) -> StructuredBialgebra:
    """Parse names like ``F(S3)`` or ``kS3`` / ``k[S3]``."""
    spec = spec.strip()
    if spec.startswith("F(") and spec.endswith(")"):
        g = spec[2:-1]
        return group_hopf("function-algebra", group_table(g), fld, f"F({g})")
    for prefix in ("k[", "C[", "F["):
        if spec.startswith(prefix) and spec.endswith("]"):
            g = spec[2:-1]
            return group_hopf("group-algebra", group_table(g), fld, f"k[{g}]")
    if spec.startswith("k"):
        g = spec[1:]
        return group_hopf("group-algebra", group_table(g), fld, f"k[{g}]")
    raise KeyError(f"cannot parse Hopf algebra name {spec!r}")


def matrix_algebra(d: int, fld: Field = EXACT_FIELD) -> StructuredBialgebra:
    """M_d with matrix units e_ij as basis (index i*d + j); algebra only."""
    n = d * d
    m = fld.zeros((n, n, n))
    for i, j, k in itertools.product(range(d), repeat=3):
        m[i * d + j, j * d + k, i * d + k] = fld.one
    unit = fld.zeros(n)
    for i in range(d):
        unit[i * d + i] = fld.one
    return StructuredBialgebra(fld, n, m, unit, name=f"M{d}", kind="algebra")


def truncated_polynomial_algebra(k: int, fld: Field = EXACT_FIELD) -> StructuredBialgebra:
    """k[x]/x^k with basis 1, x, ..., x^{k-1}; algebra only."""
    m = fld.zeros((k, k, k))
    for i, j in itertools.product(range(k), repeat=2):
        if i + j < k:
            m[i, j, i + j] = fld.one
    unit = fld.zeros(k)
    unit[0] = fld.one
    return StructuredBialgebra(fld, k, m, unit, name=f"k[x]/x^{k}", kind="algebra")


# --------------------------------------------------------------------------
# axioms


@dataclass
class Check:
    name: str
    residual: float
    passed: bool

    def as_dict(self):
        r = self.residual
        return {"name": self.name, "residual": float(abs(r)), "pass": bool(self.passed)}


@dataclass
class Report:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def residual(self, name):
        return next(c.residual for c in self.checks if c.name == name)

    def __getitem__(self, name):
        return next(c for c in self.checks if c.name == name)

    def as_dict(self):
        return {"pass": self.passed, "checks": [c.as_dict() for c in self.checks]}


def _check(fld: Field, name: str, res) -> Check:
    return Check(name, res, fld.passes(res))


def algebra_residuals(H: StructuredBialgebra) -> dict:
    m, u = H.m, H.unit
    assoc = residual(ein("ijx,xkl->ijkl", m, m), ein("jkx,ixl->ijkl", m, m))
    eye = H.field.eye(H.n)
    left_unit = residual(ein("i,ijk->jk", u, m), eye)
    right_unit = residual(ein("j,ijk->ik", u, m), eye)
    return {"associativity": assoc, "unit": max(left_unit, right_unit)}


def validate_hopf(H: StructuredBialgebra) -> Report:
    n = H.n
    shapes = {
        "m": (H.m, (n, n, n)), "unit": (H.unit, (n,)), "delta": (H.delta, (n, n, n)),
        "counit": (H.counit, (n,)), "antipode": (H.antipode, (n, n)),
    }
    for key, (arr, shape) in shapes.items():
        if arr is None or np.shape(arr) != shape:
            raise ValueError(f"{key} has shape {None if arr is None else np.shape(arr)}, expected {shape}")
    fld = H.field
    m, d, eps, s, u = H.m, H.delta, H.counit, H.antipode, H.unit
    res = algebra_residuals(H)
    res["coassociativity"] = residual(
        ein("ixc,xab->iabc", d, d), ein("iay,ybc->iabc", d, d))
    eye = fld.eye(n)
    res["counit"] = max(residual(ein("ijk,j->ik", d, eps), eye),
                        residual(ein("ijk,k->ij", d, eps), eye))
    # Delta(b_i b_j) = Delta(b_i) Delta(b_j)
    lhs = ein("ijx,xab->ijab", m, d)
    rhs = ein("ipq,jrs,pra,qsb->ijab", d, d, m, m)
    mult_delta = residual(lhs, rhs)
    mult_eps = residual(ein("ijk,k->ij", m, eps), np.outer(eps, eps))
    unit_delta = residual(ein("i,ijk->jk", u, d), np.outer(u, u))
    unit_eps = residual(np.array([u @ eps]), np.array([fld.one]))
    res["bialgebra"] = max(mult_delta, mult_eps, unit_delta, unit_eps)
    target = np.outer(eps, u)  # row i: eps(b_i) 1
    left = ein("ijk,xj,xkl->il", d, s, m)
    right = ein("ijk,xk,jxl->il", d, s, m)
    res["antipode"] = max(residual(left, target), residual(right, target))
    return Report([_check(fld, k, v) for k, v in res.items()])


def dual_hopf(H: StructuredBialgebra) -> StructuredBialgebra:
    """Hopf dual in the dual basis: m^ = Delta^T, Delta^ = m^T, S^ = S^T."""
    m_hat = np.transpose(H.delta, (1, 2, 0)).copy()
    delta_hat = np.transpose(H.m, (2, 0, 1)).copy()
    s_hat = H.antipode.T.copy()
    kinds = {"function-algebra": "group-algebra", "group-algebra": "function-algebra"}
    name = H.name[:-1] if H.name.endswith("^") else H.name + "^"
    return StructuredBialgebra(H.field, H.n, m_hat, H.counit.copy(), delta_hat,
                               H.unit.copy(), s_hat, name, H.group, kinds.get(H.kind, ""))


def antipode_square_residual(H: StructuredBialgebra):
    return residual(H.antipode @ H.antipode, H.field.eye(H.n))


# --------------------------------------------------------------------------
# integrals


@dataclass
class IntegralPair:
    Lambda: np.ndarray
    phi: np.ndarray
    side: str
    pairing: object

    def eps_Lambda(self, H):
        return self.Lambda @ H.counit

    def phi_one(self, H):
        return self.phi @ H.unit


def _first_nonzero_one(fld: Field, v):
    idx = next(i for i, x in enumerate(v) if not fld.is_zero(x))
    return v / v[idx]


def integral_space(H: StructuredBialgebra, side: str = "left") -> np.ndarray:
    """Rows spanning {L : x L = eps(x) L} (left) or {L x = eps(x) L} (right)."""
    fld = H.field
    eye = fld.eye(H.n)
    blocks = []
    for i in range(H.n):
        b = H.basis(i)
        mult = H.left_mult(b) if side == "left" else H.right_mult(b)
        blocks.append(mult - H.counit[i] * eye)
    return fld.nullspace(np.concatenate(blocks, axis=0))


def find_integrals(H: StructuredBialgebra, side: str = "left") -> IntegralPair:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    fld = H.field
    space = integral_space(H, side)
    if space.shape[0] != 1:
        raise StructuralError(f"integral space of {H.name or 'H'} has dimension {space.shape[0]}, expected 1")
    lam = _first_nonzero_one(fld, space[0])
    dual_space = integral_space(dual_hopf(H), side)
    if dual_space.shape[0] != 1:
        raise StructuralError(f"integral space of the dual has dimension {dual_space.shape[0]}, expected 1")
    phi = _first_nonzero_one(fld, dual_space[0])
    pairing = phi @ lam
    if fld.is_zero(pairing):
        raise StructuralError("phi(Lambda) vanishes; cannot normalize the pair")
    phi = phi / pairing
    return IntegralPair(lam, phi, side, phi @ lam)


def haar_integral(H: StructuredBialgebra) -> np.ndarray:
    """Two-sided integral with eps = 1 (semisimple H only); cached."""
    if "haar" not in H._cache:
        pair = find_integrals(H)
        e = pair.eps_Lambda(H)
        if H.field.is_zero(e):
            raise StructuralError("H is not semisimple: eps(Lambda) = 0")
        H._cache["haar"] = pair.Lambda / e
    return H._cache["haar"]


def semisimplicity_test(H: StructuredBialgebra, pair: IntegralPair) -> dict:
    fld = H.field
    return {"ss": not fld.is_zero(pair.eps_Lambda(H)), "css": not fld.is_zero(pair.phi_one(H))}


def fourier_map(H: StructuredBialgebra, pair: IntegralPair) -> np.ndarray:
    """Matrix of a -> phi(. a) from H to its dual (dual-basis coordinates)."""
    mat = ein("ijk,k->ij", H.m, pair.phi)  # [i, j] = phi(b_i b_j)
    if H.field.rank(mat) < H.n:
        raise StructuralError("Fourier map is singular (phi degenerate)")
    return mat


def tilde_multiplication(H: StructuredBialgebra, pair: IntegralPair, check: bool = True) -> np.ndarray:
    """m~ = F^{-1} m^ (F x F); verified against phi(S^{-1}(b_(1)) a) b_(2)."""
    fld = H.field
    f = fourier_map(H, pair)
    f_inv = fld.inv(f)
    m_hat = np.transpose(H.delta, (1, 2, 0))
    conj = ein("pa,qb,pqr,kr->abk", f, f, m_hat, f_inv)
    if check:
        closed = _tilde_closed_form(H, pair)
        res = residual(conj, closed)
        if not fld.passes(res):
            raise StructuralError(f"m~ formulas disagree (residual {float(res):.3g})")
    return conj


def _tilde_closed_form(H, pair):
    fld = H.field
    s_inv = fld.inv(H.antipode)
    # phi(S^{-1}(b_x) b_a) for all x, a
    form = ein("yx,yak,k->xa", s_inv, H.m, pair.phi)
    # m~(b_a (x) b_b) = sum_{x,k} Delta[b, x, k] form[x, a] b_k
    return ein("bxk,xa->abk", H.delta, form)


def dimension_invariant(H: StructuredBialgebra, pair: IntegralPair):
    fld = H.field
    den = pair.phi @ pair.Lambda
    if fld.is_zero(den):
        raise StructuralError("phi(Lambda) vanishes")
    return pair.phi_one(H) * pair.eps_Lambda(H) / den


def strong_left_invariance_residual(H: StructuredBialgebra, pair: IntegralPair):
    """(id x phi)((1 x c) Delta(b)) against (id x phi)((S x id)(Delta c)(1 x b))."""
    phi, m, d, s = pair.phi, H.m, H.delta, H.antipode
    # lhs[b, c, :] = sum Delta(b)_{x,y} phi(c b_y) b_x
    lhs = ein("bxy,cyk,k->bcx", d, m, phi)
    # rhs: Delta(c) = sum c_{p,q} b_p (x) b_q ; (S b_p) (x) b_q b
    rhs = ein("cpq,xp,qbk,k->bcx", d, s, m, phi)
    return residual(lhs, rhs)


def tilde_form_residual(H: StructuredBialgebra, pair: IntegralPair, mt: np.ndarray | None = None):
    """phi(c m~(a x b)) against (phi x phi)(Delta(c)(a x b))."""
    mt = tilde_multiplication(H, pair) if mt is None else mt
    phi, m, d = pair.phi, H.m, H.delta
    lhs = ein("abk,ckl,l->cab", mt, m, phi)
    rhs = ein("cpq,pax,x,qby,y->cab", d, m, phi, m, phi)
    return residual(lhs, rhs)


def tilde_module_residual(H: StructuredBialgebra, pair: IntegralPair, mt: np.ndarray | None = None):
    """m~(Delta(c) x) against c m~(x) on all basis c, x = b_a (x) b_b."""
    mt = tilde_multiplication(H, pair) if mt is None else mt
    m, d = H.m, H.delta
    lhs = ein("cpq,pax,qby,xyk->cabk", d, m, m, mt)
    rhs = ein("abx,cxk->cabk", mt, m)
    return residual(lhs, rhs)


# --------------------------------------------------------------------------
# classical Frobenius systems


@dataclass
class FrobeniusSystem:
    algebra: StructuredBialgebra
    phi: np.ndarray
    x_basis: np.ndarray  # rows
    y_basis: np.ndarray  # rows
    frobenius_element: np.ndarray  # n x n tensor
    e_index: np.ndarray
    coproduct: np.ndarray  # induced Delta, same layout as StructuredBialgebra.delta
    residuals: dict


def classical_frobenius_from_form(A: StructuredBialgebra, phi) -> FrobeniusSystem:
    """Dual bases, Frobenius element and the coalgebra induced by a form.

    The coalgebra is Delta = (Phi^{-1} x Phi^{-1}) Delta^_2 Phi with
    Phi(x) = phi(x .) and <Delta^_2 alpha, x (x) y> = alpha(y x).
    """
    fld = A.field
    phi = fld.array(phi)
    n = A.n
    gram = ein("ijk,k->ij", A.m, phi)
    rk = fld.rank(gram)
    if rk < n:
        raise ValueError(f"degenerate form: Gram matrix has rank {rk} < {n}")
    x = fld.eye(n)
    # y_i = sum_k c[i, k] b_k with phi(x_j y_i) = delta_ij, i.e. gram @ c.T = I
    y = fld.inv(gram).T
    felem = ein("ij,ik->jk", x, y)
    e_index = ein("ij,ik,jkl->l", x, y, A.m)
    # Phi as matrix: Phi(b_a)(b_c) = phi(b_a b_c) = gram[a, c]
    phi_mat = gram  # row a: coordinates of Phi(b_a) in dual basis
    # Delta^_2 on dual basis: <Delta^_2 b^*_k, b_x (x) b_y> = coeff of b_k in b_y b_x
    delta_hat2 = np.transpose(A.m, (2, 1, 0))  # [k, x, y] = m[y, x, k]
    phi_inv = fld.inv(phi_mat)  # maps dual coords -> algebra coords (row convention)
    coprod = ein("ak,kxy,xp,yq->apq", phi_mat, delta_hat2, phi_inv, phi_inv)
    # closed form: Delta(a) = sum_i a x_i (x) y_i
    closed = ein("apk,ip,iq->akq", A.m, x, y)
    res = {"coproduct_closed_form": residual(coprod, closed)}
    eye = fld.eye(n)
    res["dual_basis"] = max(
        residual(ein("ip,iq,qak,k->ap", x, y, A.m, phi), eye),
        residual(ein("apk,ip,k,iq->aq", A.m, x, phi, y), eye),
    )
    # Frobenius identities: (m x id)(id x Delta) = Delta m = (id x m)(Delta x id)
    dm = ein("abk,kpq->abpq", A.m, coprod)
    left = ein("bxq,axp->abpq", coprod, A.m)
    right = ein("apy,ybq->abpq", coprod, A.m)
    res["frobenius"] = max(residual(dm, left), residual(dm, right))
    res["counit"] = max(residual(ein("apq,p->aq", coprod, phi), eye),
                        residual(ein("apq,q->ap", coprod, phi), eye))
    return FrobeniusSystem(A, phi, x, y, felem, e_index, coprod, res)


def strong_separability_test(sys: FrobeniusSystem) -> dict:
    A = sys.algebra
    fld = A.field
    lam2 = sys.phi @ A.unit
    e = sys.e_index
    idx = next((i for i, u in enumerate(A.unit) if not fld.is_zero(u)), 0)
    lam1 = e[idx] / A.unit[idx]
    scalar = fld.close(e, lam1 * A.unit, scale=max(1.0, float(abs(complex(lam1)))))
    canonical = bool(scalar and not fld.is_zero(lam1) and not fld.is_zero(lam2))
    return {"canonical": canonical, "lambda1": lam1 if scalar else None, "lambda2": lam2,
            "product": lam1 * lam2 if scalar else None}


# --------------------------------------------------------------------------
# files


def _sparse3(t):
    out = []
    for idx in zip(*np.nonzero(np.vectorize(lambda x: x != 0, otypes=[bool])(t))):
        out.append([int(i) for i in idx] + [scalar_to_json(t[idx])])
    return out


def hopf_to_json(H: StructuredBialgebra) -> dict:
    return {
        "name": H.name,
        "n": H.n,
        "m": _sparse3(H.m),
        "unit": [scalar_to_json(x) for x in H.unit],
        "delta": _sparse3(H.delta),
        "counit": [scalar_to_json(x) for x in H.counit],
        "antipode": _sparse3(H.antipode),
    }


def hopf_from_json(obj: dict, fld: Field | None = None) -> StructuredBialgebra:
    try:
        n = int(obj["n"])
        entries = obj["m"] + obj["delta"] + obj["antipode"]
        scalars = [scalar_from_json(e[-1]) for e in entries]
        scalars += [scalar_from_json(x) for x in obj["unit"] + obj["counit"]]
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed Hopf file: {exc}") from exc
    if fld is None:
        exact = all(isinstance(x, Fraction) for x in scalars)
        fld = EXACT_FIELD if exact else COMPLEX_FIELD

    def dense(items, shape):
        t = fld.zeros(shape)
        for e in items:
            idx = tuple(int(i) for i in e[:-1])
            if len(idx) != len(shape) or any(not 0 <= i < n for i in idx):
                raise ValueError(f"index {idx} out of range for n={n}")
            t[idx] = fld.scalar(scalar_from_json(e[-1]))
        return t

    m = dense(obj["m"], (n, n, n))
    delta = dense(obj["delta"], (n, n, n))
    s = dense(obj["antipode"], (n, n))
    unit = fld.array([scalar_from_json(x) for x in obj["unit"]])
    counit = fld.array([scalar_from_json(x) for x in obj["counit"]])
    if unit.shape != (n,) or counit.shape != (n,):
        raise ValueError("unit/counit length differs from n")
    return StructuredBialgebra(fld, n, m, unit, delta, counit, s, obj.get("name", ""))


def load_hopf(path, fld: Field | None = None) -> StructuredBialgebra:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not JSON ({exc})") from exc
    if "group" in obj and "kind" in obj:
        return group_hopf(obj["kind"], obj.get("table") or group_table(obj["group"]),
                          fld or EXACT_FIELD, obj.get("name", ""))
    return hopf_from_json(obj, fld)


def save_hopf(H: StructuredBialgebra, path):
    Path(path).write_text(json.dumps(hopf_to_json(H), indent=1))
