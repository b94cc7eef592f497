"""Scalar backends and the linear algebra every other module leans on.

Two backends exist: ``exact`` keeps numpy object arrays of ``Fraction`` and
compares with ``==``; ``complex`` keeps ``complex128`` arrays and compares
through a tolerance. A :class:`Field` bundles the backend with its tolerance
so that a whole computation runs under one contract.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

EXACT = "exact"
COMPLEX = "complex"


class BackendMismatch(TypeError):
    """Raised when exact and floating scalars meet in one comparison."""


class StructuralError(ValueError):
    """A mathematical precondition failed (singular map, wrong rank, ...)."""


@dataclass(frozen=True)
class Tolerance:
    eps_abs: float = 1e-9
    eps_rel: float = 1e-9

    def __post_init__(self):
        if self.eps_abs < 0 or self.eps_rel < 0:
            raise ValueError("tolerances must be nonnegative")


DEFAULT_TOL = Tolerance()


def scalar_backend(x) -> str:
    if isinstance(x, (Fraction, Integral)) and not isinstance(x, bool):
        return EXACT
    if isinstance(x, (float, complex, np.floating, np.complexfloating)):
        return COMPLEX
    if isinstance(x, Rational):
        return EXACT
    raise TypeError(f"not a scalar: {x!r}")


def approx_eq(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    ka, kb = scalar_backend(a), scalar_backend(b)
    if ka != kb:
        raise BackendMismatch(f"cannot compare {ka} scalar with {kb} scalar")
    if ka == EXACT:
        return Fraction(a) == Fraction(b)
    a, b = complex(a), complex(b)
    return abs(a - b) <= tol.eps_abs + tol.eps_rel * max(abs(a), abs(b))


def approx_zero(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    zero = Fraction(0) if scalar_backend(a) == EXACT else 0.0
    return approx_eq(a, zero, tol)


def array_backend(a: np.ndarray) -> str:
    return EXACT if np.asarray(a).dtype == object else COMPLEX


def residual(a, b=None):
    """Max-abs entry of ``a - b``; exact arrays give a Fraction."""
    a = np.asarray(a)
    d = a if b is None else np.asarray(a - np.asarray(b))
    if d.size == 0:
        return Fraction(0) if d.dtype == object else 0.0
    if d.dtype == object:
        return max(abs(Fraction(x)) for x in d.ravel())
    return float(np.max(np.abs(d)))


def scalar_to_json(x) -> dict:
    if scalar_backend(x) == EXACT:
        x = Fraction(x)
        return {"q": f"{x.numerator}/{x.denominator}"}
    x = complex(x)
    return {"re": x.real, "im": x.imag}


def scalar_from_json(obj):
    if isinstance(obj, dict) and "q" in obj:
        return Fraction(obj["q"])
    if isinstance(obj, dict):
        return complex(obj.get("re", 0.0), obj.get("im", 0.0))
    if isinstance(obj, (int, Fraction)):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    return complex(obj)


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Integral, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (complex, np.complexfloating)):
        if x.imag != 0:
            raise BackendMismatch("complex value in exact backend")
        x = x.real
    return Fraction(x).limit_denominator() if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class Field:
    """A scalar backend together with its comparison tolerance."""

    name: str = COMPLEX
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        if self.name not in (EXACT, COMPLEX):
            raise ValueError(f"unknown backend {self.name!r}")
        if self.name == COMPLEX and (self.tol.eps_abs <= 0 or self.tol.eps_rel <= 0):
            raise ValueError("floating backend needs strictly positive tolerances")

    @property
    def exact(self) -> bool:
        return self.name == EXACT

    # construction
    def array(self, data) -> np.ndarray:
        if self.exact:
            a = np.asarray(data, dtype=object)
            flat = [_to_fraction(x) for x in a.ravel()]
            out = np.empty(a.shape, dtype=object)
            out.ravel()[:] = flat if flat else []
            return out
        a = np.asarray(data)
        if a.dtype == object:
            a = np.vectorize(complex, otypes=[complex])(a) if a.size else a.astype(complex)
        return a.astype(np.complex128)

    def zeros(self, shape) -> np.ndarray:
        if self.exact:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.complex128)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    @property
    def one(self):
        return Fraction(1) if self.exact else 1.0 + 0j

    @property
    def zero(self):
        return Fraction(0) if self.exact else 0j

    def scalar(self, x):
        return _to_fraction(x) if self.exact else complex(x)

    # comparison
    def is_zero(self, x) -> bool:
        return approx_zero(self.scalar(x), self.tol)

    def eq(self, a, b) -> bool:
        return approx_eq(self.scalar(a), self.scalar(b), self.tol)

    def passes(self, res) -> bool:
        """A residual passes: exactly zero, or below eps_abs in floating mode."""
        if self.exact:
            return res == 0
        return abs(complex(res)) <= self.tol.eps_abs

    def close(self, a, b, scale: float = 1.0) -> bool:
        res = residual(a, b)
        if self.exact:
            return res == 0
        bound = self.tol.eps_abs + self.tol.eps_rel * scale
        return float(res) <= bound

    # linear algebra
    def rref(self, m: np.ndarray):
        """Reduced row echelon form and pivot columns."""
        a = self.array(m).copy()
        if a.ndim != 2:
            raise ValueError("rref needs a matrix")
        rows, cols = a.shape
        pivots = []
        r = 0
        scale = 1.0 if self.exact or a.size == 0 else max(1.0, float(np.max(np.abs(a))))
        thresh = 0 if self.exact else 1e-10 * scale
        for c in range(cols):
            if r >= rows:
                break
            if self.exact:
                piv = next((i for i in range(r, rows) if a[i, c] != 0), None)
            else:
                i = r + int(np.argmax(np.abs(a[r:, c])))
                piv = i if abs(a[i, c]) > thresh else None
            if piv is None:
                continue
            if piv != r:
                a[[r, piv]] = a[[piv, r]]
            a[r] = a[r] / a[r, c]
            if self.exact:
                for i in range(rows):
                    if i != r and a[i, c] != 0:
                        a[i] = a[i] - a[i, c] * a[r]
            else:
                col = a[:, c].copy()
                col[r] = 0
                a -= np.outer(col, a[r])
                a[np.abs(a) < thresh * 1e-3] = 0
            pivots.append(c)
            r += 1
        return a[:r], pivots

    def rank(self, m: np.ndarray) -> int:
        m = self.array(m)
        if m.size == 0:
            return 0
        if self.exact:
            return len(self.rref(m)[1])
        s = np.linalg.svd(m, compute_uv=False)
        return int(np.sum(s > self._svd_cut(s)))

    def _svd_cut(self, s):
        return max(1e-10, 1e-10 * (s[0] if len(s) else 0.0))

    def nullspace(self, m: np.ndarray) -> np.ndarray:
        """Rows spanning {x : m x = 0}, in reduced echelon form."""
        m = self.array(m)
        n = m.shape[1]
        if m.shape[0] == 0:
            return self.eye(n)
        if self.exact:
            r, piv = self.rref(m)
            free = [c for c in range(n) if c not in piv]
            out = self.zeros((len(free), n))
            for k, f in enumerate(free):
                out[k, f] = Fraction(1)
                for i, p in enumerate(piv):
                    out[k, p] = -r[i, f]
            return out
        if m.shape[0] > n:
            m = np.linalg.qr(m, mode="r")  # same kernel, square
        _, s, vh = np.linalg.svd(m, full_matrices=True)
        rk = int(np.sum(s > self._svd_cut(s))) if len(s) else 0
        basis = vh[rk:].conj()
        if basis.shape[0] == 0:
            return basis
        return self.rref(basis)[0]

    def rowspace(self, m: np.ndarray) -> np.ndarray:
        """Canonical (echelon) basis of the row space."""
        m = self.array(m)
        if m.shape[0] == 0:
            return m
        if not self.exact:
            u, s, vh = np.linalg.svd(m, full_matrices=False)
            rk = int(np.sum(s > self._svd_cut(s)))
            m = vh[:rk]
        return self.rref(m)[0]

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Solve a x = b for square invertible a (b may be a matrix)."""
        a, b = self.array(a), self.array(b)
        if a.shape[0] != a.shape[1]:
            raise ValueError("solve needs a square matrix")
        if not self.exact:
            if self.rank(a) < a.shape[0]:
                raise StructuralError("singular matrix")
            return np.linalg.solve(a, b)
        vec = b.ndim == 1
        bb = b.reshape(len(b), -1)
        aug = np.concatenate([a, bb], axis=1)
        r, piv = self.rref(aug)
        n = a.shape[0]
        if piv[:n] != list(range(n)) or len(piv) > n:
            raise StructuralError("singular matrix")
        x = r[:, n:]
        return x.ravel() if vec else x

    def inv(self, a: np.ndarray) -> np.ndarray:
        return self.solve(a, self.eye(a.shape[0]))

    def lstsq(self, a: np.ndarray, b: np.ndarray):
        """Least-squares (exact: consistent) solution and its residual."""
        a, b = self.array(a), self.array(b)
        if self.exact:
            vec = b.ndim == 1
            bb = b.reshape(len(b), -1)
            aug = np.concatenate([a, bb], axis=1)
            r, piv = self.rref(aug)
            n = a.shape[1]
            if any(p >= n for p in piv):
                raise StructuralError("inconsistent linear system")
            x = self.zeros((n, bb.shape[1]))
            for i, p in enumerate(piv):
                x[p] = r[i, n:]
            res = residual(a @ x, bb)
            return (x.ravel() if vec else x), res
        x, *_ = np.linalg.lstsq(a, b, rcond=None)
        return x, residual(a @ x, b)

    def range_factor(self, p: np.ndarray):
        """Split an idempotent p as u @ v with v @ u = identity."""
        p = self.array(p)
        cols = self.rowspace(p.T)
        u = cols.T
        if u.shape[1] == 0:
            return u, self.zeros((0, p.shape[0]))
        if self.exact:
            gram = u.T @ u
            v = self.solve(gram, u.T) @ p
        else:
            v = np.linalg.pinv(u) @ p
        return u, v

    def sqrt(self, x):
        if self.exact:
            x = Fraction(x)
            rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
            if x >= 0 and rn * rn == x.numerator and rd * rd == x.denominator:
                return Fraction(rn, rd)
            raise StructuralError(f"{x} has no rational square root")
        return complex(np.sqrt(complex(x)))


EXACT_FIELD = Field(EXACT)
COMPLEX_FIELD = Field(COMPLEX)


def _from_ints(res, den):
    out = np.empty(res.shape, dtype=object)
    if den == 1:
        out.ravel()[:] = [Fraction(int(x)) for x in res.ravel()]
    else:
        out.ravel()[:] = [Fraction(int(x), den) for x in res.ravel()]
    return out


_INT64_SAFE = 2 ** 62


def _machine_ints(ints):
    """Cast integer object arrays to int64 when no intermediate can overflow.

    The bound multiplies, per operand, the largest entry by the entry count,
    which dominates any sum of products a multilinear op can form.
    """
    bound = 1
    for a in ints:
        big = max((abs(int(x)) for x in a.ravel()), default=0)
        bound *= max(1, big) * max(1, a.size)
        if bound >= _INT64_SAFE:
            return None
    return [a.astype(np.int64) for a in ints]


def _exact_apply(op, mats):
    """Apply a multilinear numpy op to exact arrays via integer arithmetic."""
    ints, den = [], 1
    for m in mats:
        i, d = _integerize(np.asarray(m) if np.asarray(m).dtype == object else EXACT_FIELD.array(m))
        ints.append(i)
        den *= d
    fast = _machine_ints(ints)
    return _from_ints(np.asarray(op(fast if fast is not None else ints)), den)


def kron(*mats):
    if any(np.asarray(m).dtype == object for m in mats):
        def op(ms):
            out = ms[0]
            for m in ms[1:]:
                out = np.kron(out, m)
            return out
        return _exact_apply(op, mats)
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def mm(*mats):
    """Matrix chain product (exact operands multiplied as integers)."""
    if any(np.asarray(m).dtype == object for m in mats):
        def op(ms):
            out = ms[0]
            for m in ms[1:]:
                out = out @ m
            return out
        return _exact_apply(op, mats)
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out


def fsum_complex(values) -> complex:
    """Exactly rounded sum of complex numbers (order independent)."""
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _integerize(a: np.ndarray):
    """Object array of Fractions -> (object array of ints, common denominator)."""
    flat = a.ravel()
    den = 1
    for x in flat:
        d = x.denominator if isinstance(x, Fraction) else 1
        if den % d:
            den = den * d // math.gcd(den, d)
    out = np.empty(a.shape, dtype=object)
    out.ravel()[:] = [x.numerator * (den // x.denominator) if isinstance(x, Fraction) else int(x)
                      for x in flat]
    return out, den


def ein(subscripts: str, *ops):
    """einsum with contraction-order optimization.

    Exact operands are rescaled to python ints first; integer arithmetic on
    object arrays is an order of magnitude faster than Fraction arithmetic.
    """
    opt = "greedy" if len(ops) > 2 else False
    if not any(np.asarray(o).dtype == object for o in ops):
        return np.einsum(subscripts, *ops, optimize=opt)
    ints, den = [], 1
    for o in ops:
        o = np.asarray(o)
        if o.dtype != object:
            o = EXACT_FIELD.array(o)
        i, d = _integerize(o)
        ints.append(i)
        den *= d
    fast = _machine_ints(ints)
    res = np.einsum(subscripts, *(fast if fast is not None else ints), optimize=opt)
    if np.ndim(res) == 0:
        return Fraction(int(res), den)
    return _from_ints(res, den)
