"""Frobenius algebra objects in Rep(H).

A Frobenius algebra is (Q, v, v', w, w') with unit v: 1 -> Q, counit
v': Q -> 1, comultiplication w: Q -> QQ and multiplication w': QQ -> Q.
Every diagram is written out as a product of Kronecker-padded matrices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .hopf import IntegralPair, StructuredBialgebra, tilde_multiplication
from .numerics import Field, StructuralError, kron, mm, residual, scalar_from_json, scalar_to_json
from .repcat import (
    DualityPack,
    Representation,
    direct_sum,
    dual_rep,
    hom_space,
    intertwiner_residual,
    regular_rep,
    tensor_product,
    trivial_rep,
)


@dataclass(eq=False)
class FrobeniusData:
    Q: Representation
    v: np.ndarray
    vprime: np.ndarray
    w: np.ndarray
    wprime: np.ndarray
    name: str = ""

    @property
    def field(self) -> Field:
        return self.Q.field

    @property
    def dim(self) -> int:
        return self.Q.dim

    def eye(self):
        return self.field.eye(self.dim)


@dataclass
class AxiomReport:
    residuals: dict
    field: Field

    @property
    def checks(self):
        return [{"name": k, "residual": float(abs(v)), "pass": bool(self.field.passes(v))}
                for k, v in self.residuals.items()]

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    @property
    def failed(self):
        return [c["name"] for c in self.checks if not c["pass"]]


def _shape_check(F: FrobeniusData):
    q = F.dim
    want = {"v": (q, 1), "vprime": (1, q), "w": (q * q, q), "wprime": (q, q * q)}
    for key, shape in want.items():
        got = np.shape(getattr(F, key))
        if got != shape:
            raise ValueError(f"{key} has shape {got}, expected {shape}")


def check_axioms(F: FrobeniusData) -> AxiomReport:
    _shape_check(F)
    i = F.eye()
    v, vp, w, wp = F.v, F.vprime, F.w, F.wprime
    Q = F.Q
    QQ = tensor_product(Q, Q)
    one = trivial_rep(Q.H)
    res = {
        "intertwiners": max(intertwiner_residual(one, Q, v), intertwiner_residual(Q, one, vp),
                            intertwiner_residual(Q, QQ, w), intertwiner_residual(QQ, Q, wp)),
        "coassociativity": residual(mm(kron(w, i), w), mm(kron(i, w), w)),
        "associativity": residual(mm(wp, kron(wp, i)), mm(wp, kron(i, wp))),
        "counit": max(residual(mm(kron(vp, i), w), i), residual(mm(kron(i, vp), w), i)),
        "unit": max(residual(mm(wp, kron(v, i)), i), residual(mm(wp, kron(i, v)), i)),
        "frobenius": max(residual(mm(kron(i, wp), kron(w, i)), mm(w, wp)),
                         residual(mm(kron(wp, i), kron(i, w)), mm(w, wp))),
    }
    return AxiomReport(res, F.field)


def monoid_residuals(Q: Representation, v, wprime) -> dict:
    i = Q.field.eye(Q.dim)
    return {
        "associativity": residual(mm(wprime, kron(wprime, i)), mm(wprime, kron(i, wprime))),
        "unit": max(residual(mm(wprime, kron(v, i)), i), residual(mm(wprime, kron(i, v)), i)),
    }


def _scalar_part(fld: Field, mat):
    """(mean of the diagonal, whether mat is that multiple of the identity)."""
    n = mat.shape[0]
    lam = sum(mat[k, k] for k in range(n)) / n
    scale = 1.0 + float(abs(complex(lam)))
    return lam, fld.close(mat, lam * fld.eye(n), scale=scale)


def lambdas(F: FrobeniusData):
    lam1, scalar = _scalar_part(F.field, mm(F.wprime, F.w))
    lam2 = (F.vprime @ F.v)[0, 0]
    return (lam1 if scalar else None), lam2


def classify(F: FrobeniusData) -> dict:
    fld = F.field
    lam1, lam2 = lambdas(F)
    canonical = lam1 is not None and not fld.is_zero(lam1) and not fld.is_zero(lam2)
    normalized = canonical and fld.eq(lam1, lam2)
    one = trivial_rep(F.Q.H)
    irreducible = hom_space(one, F.Q).dim == 1
    return {
        "canonical": bool(canonical),
        "normalized": bool(normalized),
        "irreducible": bool(irreducible),
        "lambda1": lam1,
        "lambda2": lam2,
        "product": lam1 * lam2 if lam1 is not None else None,
    }


# --------------------------------------------------------------------------
# constructions


def regular_from_hopf(H: StructuredBialgebra, pair: IntegralPair) -> FrobeniusData:
    """Q = H with v(c) = c Lambda, v' = eps, w = Delta, w' = m~."""
    fld = H.field
    n = H.n
    mt = tilde_multiplication(H, pair)
    Q = regular_rep(H)
    v = pair.Lambda.reshape(n, 1).copy()
    vp = H.counit.reshape(1, n).copy()
    w = np.transpose(H.delta, (1, 2, 0)).reshape(n * n, n).copy()
    wp = np.transpose(mt, (2, 0, 1)).reshape(n, n * n).copy()
    F = FrobeniusData(Q, v, vp, w, wp, f"regular({H.name})")
    res = check_axioms(F).residuals["intertwiners"]
    if not fld.passes(res):
        raise StructuralError(f"regular structure maps are not intertwiners ({float(res):.3g})")
    return F


def from_dual_pair(pack: DualityPack) -> FrobeniusData:
    """Q = X Xbar with v = e, v' = eta, w = id eps id, w' = id d id."""
    X = pack.X
    fld = X.field
    ix, ixb = fld.eye(X.dim), fld.eye(pack.Xbar.dim)
    Q = tensor_product(X, pack.Xbar)
    w = kron(ix, pack.eps, ixb)
    wp = kron(ix, pack.d, ixb)
    return FrobeniusData(Q, pack.e.copy(), pack.eta.copy(), w, wp, f"dual_pair({X.name})")


def trivial_frobenius(H: StructuredBialgebra) -> FrobeniusData:
    one = trivial_rep(H)
    e = H.field.eye(1)
    return FrobeniusData(one, e.copy(), e.copy(), e.copy(), e.copy(), "1")


def renormalize(F: FrobeniusData, alpha, beta) -> FrobeniusData:
    fld = F.field
    alpha, beta = fld.scalar(alpha), fld.scalar(beta)
    return replace(F, v=alpha * F.v, vprime=F.vprime / beta, w=beta * F.w, wprime=F.wprime / alpha)


def normalize(F: FrobeniusData) -> FrobeniusData:
    """Rescale so that lambda1 = lambda2 (floating backend only)."""
    if F.field.exact:
        raise ValueError("normalization needs square roots; use the complex backend")
    lam1, lam2 = lambdas(F)
    if lam1 is None:
        raise StructuralError("algebra is not canonical")
    return renormalize(F, 1.0, np.sqrt(complex(lam2) / complex(lam1)))


def frobenius_direct_sum(F1: FrobeniusData, F2: FrobeniusData) -> FrobeniusData:
    fld = F1.field
    a, b = F1.dim, F2.dim
    q = a + b
    Q = direct_sum(F1.Q, F2.Q)
    v = np.concatenate([F1.v, F2.v], axis=0)
    vp = np.concatenate([F1.vprime, F2.vprime], axis=1)
    w = fld.zeros((q * q, q))
    wp = fld.zeros((q, q * q))
    for F, off in ((F1, 0), (F2, a)):
        d = F.dim
        for i in range(d):
            for j in range(d):
                row = (i + off) * q + (j + off)
                w[row, off:off + d] = F.w[i * d + j]
                wp[off:off + d, row] = F.wprime[:, i * d + j]
    return FrobeniusData(Q, v, vp, w, wp, f"{F1.name}+{F2.name}")


def selfduality_iso(Q: Representation, vprime, wprime):
    """s: Q -> Qbar with s(x)(y) = v'w'(x y)."""
    form = (vprime @ wprime).reshape(Q.dim, Q.dim)  # form[i, j] = r'(b_i b_j)
    return form.T.copy()


def complete_from_algebra(Q: Representation, v, wprime, s, vprime) -> FrobeniusData:
    """Build the comultiplication of a monoid (Q, v, w') with Q self-dual via s.

    Hypotheses: (Q, v, w') is a monoid, dim Hom(1, Q) = 1, and
    eta_Q (id s) = d_Q (s id) = v' w'.  Then r = (id s^-1) e_Q and
    w = (id w')(r id).
    """
    fld = Q.field
    n = Q.dim
    i = fld.eye(n)
    v, wprime, s, vprime = (fld.array(x) for x in (v, wprime, s, vprime))
    mres = monoid_residuals(Q, v, wprime)
    for k, r in mres.items():
        if not fld.passes(r):
            raise StructuralError(f"precondition failed: monoid {k} (residual {float(abs(r)):.3g})")
    one = trivial_rep(Q.H)
    h = hom_space(one, Q).dim
    if h != 1:
        raise StructuralError(f"precondition failed: dim Hom(1, Q) = {h}, expected 1")
    qb = dual_rep(Q)
    sres = intertwiner_residual(Q, qb, s)
    if not fld.passes(sres) or fld.rank(s) < n:
        raise StructuralError("precondition failed: s is not an isomorphism Q -> Qbar")
    idv = i.reshape(n * n, 1)
    e_q, eps_q, d_q, eta_q = idv, idv, idv.T, idv.T
    target = vprime @ wprime
    fres = max(residual(eta_q @ kron(i, s), target), residual(d_q @ kron(s, i), target))
    if not fld.passes(fres):
        raise StructuralError(f"precondition failed: self-duality condition (residual {float(abs(fres)):.3g})")
    s_inv = fld.inv(s)
    r = kron(i, s_inv) @ e_q
    r_alt = kron(s_inv, i) @ eps_q
    if not fld.passes(residual(r, r_alt)):
        raise StructuralError("the two expressions for r disagree")
    w = kron(i, wprime) @ kron(r, i)
    w_alt = kron(wprime, i) @ kron(i, r)
    if not fld.passes(residual(w, w_alt)):
        raise StructuralError("the two expressions for w disagree")
    return FrobeniusData(Q, v, vprime, w, wprime, "completed")


def self_duality(F: FrobeniusData) -> dict:
    i = F.eye()
    r = F.w @ F.v
    rp = F.vprime @ F.wprime
    res = max(residual(kron(rp, i) @ kron(i, r), i), residual(kron(i, rp) @ kron(r, i), i))
    return {"r": r, "rprime": rp, "residual": res, "passed": F.field.passes(res),
            "rprime_r": (rp @ r)[0, 0]}


# --------------------------------------------------------------------------
# files


def _mat_to_json(m):
    return [[scalar_to_json(x) for x in row] for row in np.atleast_2d(m)]


def _mat_from_json(rows, fld: Field):
    return fld.array([[scalar_from_json(x) for x in row] for row in rows])


def frobenius_to_json(F: FrobeniusData, category_ref: str = "") -> dict:
    return {
        "category_ref": category_ref or F.Q.H.name,
        "Q": [_mat_to_json(m) for m in F.Q.mats],
        "v": _mat_to_json(F.v),
        "vprime": _mat_to_json(F.vprime),
        "w": _mat_to_json(F.w),
        "wprime": _mat_to_json(F.wprime),
        "name": F.name,
    }


def frobenius_from_json(obj: dict, H: StructuredBialgebra) -> FrobeniusData:
    fld = H.field
    try:
        mats = np.stack([_mat_from_json(m, fld) for m in obj["Q"]])
        F = FrobeniusData(Representation(H, mats, "Q"), _mat_from_json(obj["v"], fld),
                          _mat_from_json(obj["vprime"], fld), _mat_from_json(obj["w"], fld),
                          _mat_from_json(obj["wprime"], fld), obj.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed Frobenius file: {exc}") from exc
    if mats.shape[0] != H.n:
        raise ValueError(f"Q has {mats.shape[0]} action matrices, algebra has dimension {H.n}")
    _shape_check(F)
    return F


def save_frobenius(F: FrobeniusData, path, category_ref: str = ""):
    Path(path).write_text(json.dumps(frobenius_to_json(F, category_ref)))


def load_frobenius(path, H: StructuredBialgebra) -> FrobeniusData:
    return frobenius_from_json(json.loads(Path(path).read_text()), H)
