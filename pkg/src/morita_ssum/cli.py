"""Command-line front end.

Every command prints one report (JSON by default) that embeds the run
configuration and a ``checks`` list of ``{name, residual, pass}``.  Exit codes:
0 when every check passes, 1 when one fails, 2 for bad input or usage.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import frobenius as fr
from . import hopf as hp
from . import morita as mo
from . import repcat as rc
from . import skeletal as sk
from . import statesum as ss
from .numerics import COMPLEX, EXACT, Field, StructuralError, Tolerance, scalar_to_json


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    scalar: str = COMPLEX
    tol: float = 1e-9
    threads: int = 1
    report: str = "json"
    deterministic: bool = False

    def __post_init__(self):
        if self.scalar not in (EXACT, COMPLEX):
            raise UsageError(f"--scalar must be exact or complex, got {self.scalar!r}")
        if self.threads < 1:
            raise UsageError("--threads must be at least 1")
        if self.scalar == COMPLEX and not self.tol > 0:
            raise UsageError("--tol must be positive in complex mode")
        if self.report not in ("json", "text"):
            raise UsageError("--report must be json or text")

    def field(self) -> Field:
        if self.scalar == EXACT:
            return Field(EXACT)
        return Field(COMPLEX, Tolerance(self.tol, self.tol))

    def complex_field(self) -> Field:
        return Field(COMPLEX, Tolerance(self.tol, self.tol))


class Result:
    def __init__(self, command: str, cfg: RunConfig):
        self.command = command
        self.cfg = cfg
        self.checks = []
        self.values = {}

    def check(self, name, res, passed=None, tol=None):
        r = _num(res)
        if passed is None:
            passed = r <= (self.cfg.tol if tol is None else tol)
        self.checks.append({"name": name, "residual": r, "pass": bool(passed)})

    def flag(self, name, ok: bool):
        self.checks.append({"name": name, "residual": 0.0 if ok else 1.0, "pass": bool(ok)})

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def as_dict(self):
        return {"command": self.command, "config": asdict(self.cfg), "checks": self.checks,
                "pass": self.passed, "results": self.values}


def _num(x) -> float:
    return float(abs(complex(x)))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return z.real if z.imag == 0 else {"re": z.real, "im": z.imag}
    if x is None or isinstance(x, str):
        return x
    try:
        return scalar_to_json(x)
    except (TypeError, ValueError):
        return str(x)


def _scalar(x):
    """Human-friendly scalar: exact stays a string fraction, floats collapse when real."""
    from fractions import Fraction
    if isinstance(x, Fraction):
        return str(x)
    z = complex(x)
    return z.real if abs(z.imag) <= 1e-12 * max(1.0, abs(z.real)) else z


# --------------------------------------------------------------------------
# input resolution


def _resolve(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    q = ss.fixtures_dir() / name
    if q.exists():
        return q
    raise UsageError(f"no such file: {name}")


def _load_hopf(name: str, fld: Field) -> hp.StructuredBialgebra:
    try:
        path = _resolve(name)
    except UsageError:
        try:
            return hp.named_hopf(name, fld)
        except KeyError:
            raise UsageError(f"no such file or Hopf algebra name: {name}") from None
    return hp.load_hopf(path, fld)


def _load_frobenius(H, which: str):
    if which == "regular":
        return fr.regular_from_hopf(H, hp.find_integrals(H))
    return fr.load_frobenius(_resolve(which), H)


def _load_triangulation(name: str):
    try:
        path = _resolve(name)
    except UsageError:
        stem = name[:-5] if name.endswith(".json") else name
        if stem in ss.bundled_manifolds():
            return ss.bundled(stem)
        raise
    return ss.load_triangulation(path)


def _load_skeletal(name: str):
    try:
        path = _resolve(name)
    except UsageError:
        if name.lower() in sk.BUILTINS:
            return sk.builtin(name)
        raise
    return sk.load_skeletal(path)


# --------------------------------------------------------------------------
# commands


def cmd_hopf(args, cfg, out: Result):
    H = _load_hopf(args.file, cfg.field())
    out.values["name"] = H.name
    out.values["dim"] = H.n
    if args.action == "validate":
        for c in hp.validate_hopf(H).checks:
            out.check(c.name, c.residual, c.passed)
        out.check("antipode_square", hp.antipode_square_residual(H),
                  H.field.passes(hp.antipode_square_residual(H)))
        return
    pair = hp.find_integrals(H)
    if args.action == "integrals":
        ssi = hp.semisimplicity_test(H, pair)
        out.values.update({"Lambda": [_scalar(x) for x in pair.Lambda],
                           "phi": [_scalar(x) for x in pair.phi],
                           "phi_Lambda": _scalar(pair.phi @ pair.Lambda),
                           "semisimple": ssi["ss"], "cosemisimple": ssi["css"]})
        out.check("left_invariance", hp.strong_left_invariance_residual(H, pair),
                  H.field.passes(hp.strong_left_invariance_residual(H, pair)))
        out.flag("semisimple", ssi["ss"])
        out.flag("cosemisimple", ssi["css"])
    elif args.action == "invariant":
        val = hp.dimension_invariant(H, pair)
        out.values["invariant"] = _scalar(val)
        res = val - H.n
        out.check("dimension_invariant", res, H.field.passes(res))


def cmd_category(args, cfg, out: Result):
    H = _load_hopf(args.file, cfg.complex_field())
    table = rc.irreps(H)
    infos = [rc.trace_and_dim(rc.duality_pack(s)) for s in table.simples]
    out.values["simples"] = [{"name": s.name, "dim": s.dim, "multiplicity": m}
                             for s, m in zip(table.simples, table.regular_multiplicity)]
    if args.action == "dims":
        out.values["d"] = [_scalar(i["d"]) for i in infos]
        gd = rc.global_dimension(table)
        out.values["global_dim"] = _scalar(gd)
        out.check("global_dim", gd - H.n)
        out.check("spherical", max(_num(i["trL"] - i["trR"]) for i in infos))
    count = sum(s.dim * m for s, m in zip(table.simples, table.regular_multiplicity))
    out.check("regular_count", count - H.n)


def cmd_frobenius(args, cfg, out: Result):
    H = _load_hopf(args.files[0], cfg.field())
    if args.action == "regular":
        F = _load_frobenius(H, "regular")
        if args.out:
            fr.save_frobenius(F, args.out, H.name)
            out.values["written"] = str(args.out)
    else:
        if len(args.files) < 2:
            raise UsageError("frobenius check needs <hopf-file> <frobenius-file|regular>")
        F = _load_frobenius(H, args.files[1])
    rep = fr.check_axioms(F)
    for c in rep.checks:
        out.check(c["name"], c["residual"], c["pass"])
    cl = fr.classify(F)
    out.values.update({k: (_scalar(v) if v is not None and not isinstance(v, bool) else v)
                       for k, v in cl.items()})
    out.flag("canonical", cl["canonical"])
    if args.action == "regular" and cl["canonical"]:
        res = cl["product"] - H.n
        out.check("lambda_product", res, H.field.passes(res))


def _context(args, cfg):
    if len(args.files) < 2:
        raise UsageError("morita commands need <hopf-file> <frobenius-file|regular>")
    return args.files[0], args.files[1]


def cmd_morita(args, cfg, out: Result):
    hfile, ffile = _context(args, cfg)
    if args.action == "build":
        H = _load_hopf(hfile, cfg.complex_field())
        F = _load_frobenius(H, ffile)
        ctx = mo.build_context(F, name=H.name)
        ud = ctx.e0.unit_and_duality()
        for k, v in ud["residuals"].items():
            out.check(f"unit_duality.{k}", v)
        bal = mo.dimension_balance(ctx, cfg.tol)
        out.check("corner_balance", bal["spread"], bal["passed"])
        ind = mo.induction_matrix(ctx)
        out.check("induction_balance", ind["balance_residual"])
        rep = mo.context_report(ctx)
        sv = sk.validate_skeletal(sk.skeletal_from_json(rep["skeletal"]), max(cfg.tol, 1e-9))
        for c in sv.checks:
            out.check(f"skeletal.{c['name']}", c["residual"], c["pass"])
        out.values.update({k: v for k, v in rep.items() if k != "skeletal"})
        if args.out:
            Path(args.out).write_text(json.dumps(_jsonable(rep), indent=1, sort_keys=cfg.deterministic))
            out.values["written"] = str(args.out)
        return
    H = _load_hopf(hfile, cfg.field())
    F = _load_frobenius(H, ffile)
    ctx = mo.build_context(F, name=H.name, corners=False)
    prof = mo.depth_profile(ctx)
    out.values.update({"depth_two": prof["depth_two"], "irreducible": prof["irreducible"]})
    R = mo.reconstruct_hopf(ctx)
    for k, v in R.report.items():
        if isinstance(v, dict) and "checks" in v:
            for c in v["checks"]:
                out.check(f"{k}.{c['name']}", c["residual"], c["pass"])
        elif k == "pairing_rank":
            out.flag("pairing_nondegenerate", v == R.A.n)
        else:
            out.check(k, v, H.field.passes(v))
    out.values["dim_A"] = R.A.n
    out.values["dim_B"] = R.B.n
    if ffile == "regular":
        cop = mo.co_opposite(H)
        cmp = mo.compare_commutative(R.A, cop) if _commutative(R.A) else _invariants(R.A, cop)
        out.values["comparison_with_cop"] = cmp
        out.flag("matches_cop", cmp["matched"])
    if args.out:
        hp.save_hopf(R.A, args.out)
        out.values["written"] = str(args.out)


def _commutative(A) -> bool:
    m = A.m
    return A.field.passes(max(_num(x) for x in (m - np.transpose(m, (1, 0, 2))).ravel()) if m.size else 0)


def _invariants(A, H) -> dict:
    """Dimension and antipode character for non-commutative algebras."""
    ta, th = complex(np.trace(A.antipode)), complex(np.trace(H.antipode))
    ok = A.n == H.n and abs(ta - th) < 1e-8
    return {"matched": bool(ok), "dim": [A.n, H.n], "trace_S": [ta.real, th.real]}


def cmd_skeletal(args, cfg, out: Result):
    if args.action == "validate":
        data = _load_skeletal(args.file)
        out.values.update({"name": data.name, "labels": list(data.labels)})
        rep = sk.validate_skeletal(data, max(cfg.tol, sk.PENTAGON_TOL) if cfg.scalar == COMPLEX else sk.PENTAGON_TOL)
        for c in rep.checks:
            out.check(c["name"], c["residual"], c["pass"])
        return
    H = _load_hopf(args.file, cfg.complex_field())
    if args.frobenius:
        ctx = mo.build_context(_load_frobenius(H, args.frobenius), name=H.name)
        data = sk.context_skeletal(ctx)
    else:
        data = sk.extract_skeletal(rc.RepCategory(H), name=f"Rep({H.name})")
    rep = sk.validate_skeletal(data)
    for c in rep.checks:
        out.check(c["name"], c["residual"], c["pass"])
    out.values.update({"name": data.name, "labels": list(data.labels),
                       "dims": {a: _scalar(d) for a, d in data.dims.items()}})
    if args.out:
        sk.save_skeletal(data, args.out)
        out.values["written"] = str(args.out)


def cmd_invariant(args, cfg, out: Result):
    data = _load_skeletal(args.data)
    M = _load_triangulation(args.triangulation)
    M.validate()
    out.values["manifold"] = M.name
    out.values["data"] = data.name
    if args.bicolored or args.labels:
        labels = args.labels or "A" * M.n_vertices
        val = ss.bicolored_invariant(M, data, labels, cfg.threads)
        out.values["labels"] = labels
    else:
        val = ss.bw_invariant(M, data, cfg.threads)
    out.values["invariant"] = _scalar(val)
    out.flag("finite", bool(np.isfinite(complex(val))))


def cmd_oracle(args, cfg, out: Result):
    try:
        table = hp.group_table(args.group)
    except KeyError:
        raise UsageError(f"unknown group {args.group!r}") from None
    val = ss.flat_bundle_oracle(args.pi1, table)
    out.values.update({"pi1": args.pi1, "group": args.group, "value": val,
                       "hom_count": int(round(val * len(table)))})


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS so a flag given before the subcommand is not reset by the subparser
    common.add_argument("--scalar", choices=[EXACT, COMPLEX], default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--report", choices=["json", "text"], default=argparse.SUPPRESS)
    common.add_argument("--deterministic", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="morita-ssum", parents=[common],
                                description="Morita contexts, skeletal data and state sums.")
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hopf", parents=[common], help="Hopf algebra checks")
    h.add_argument("action", choices=["validate", "integrals", "invariant"])
    h.add_argument("file")
    h.set_defaults(func=cmd_hopf)

    c = sub.add_parser("category", parents=[common], help="simple objects of Rep(H)")
    c.add_argument("action", choices=["irreps", "dims"])
    c.add_argument("file")
    c.set_defaults(func=cmd_category)

    f = sub.add_parser("frobenius", parents=[common], help="Frobenius algebra checks")
    f.add_argument("action", choices=["check", "regular"])
    f.add_argument("files", nargs="+")
    f.set_defaults(func=cmd_frobenius)

    m = sub.add_parser("morita", parents=[common], help="Morita context and Hopf reconstruction")
    m.add_argument("action", choices=["build", "reconstruct"])
    m.add_argument("files", nargs="+")
    m.set_defaults(func=cmd_morita)

    s = sub.add_parser("skeletal", parents=[common], help="skeletal data")
    s.add_argument("action", choices=["validate", "extract"])
    s.add_argument("file")
    s.add_argument("frobenius", nargs="?", default=None)
    s.set_defaults(func=cmd_skeletal)

    i = sub.add_parser("invariant", parents=[common], help="state-sum invariant")
    i.add_argument("data")
    i.add_argument("triangulation")
    i.add_argument("--bicolored", action="store_true")
    i.add_argument("--labels", default=None)
    i.set_defaults(func=cmd_invariant)

    o = sub.add_parser("oracle", parents=[common], help="reference values")
    o.add_argument("kind", choices=["flat-bundles"])
    o.add_argument("pi1")
    o.add_argument("group")
    o.set_defaults(func=cmd_oracle)
    return p


def _config(args) -> RunConfig:
    if not hasattr(args, "out"):
        args.out = None
    return RunConfig(
        scalar=getattr(args, "scalar", COMPLEX),
        tol=getattr(args, "tol", 1e-9),
        threads=getattr(args, "threads", 1),
        report=getattr(args, "report", "json"),
        deterministic=getattr(args, "deterministic", False),
    )


def _render(res: Result, extra: dict, cfg: RunConfig) -> str:
    d = res.as_dict()
    d.update(extra)
    if cfg.report == "json":
        return json.dumps(_jsonable(d), indent=1, sort_keys=cfg.deterministic)
    lines = [f"# {res.command}  config: " + " ".join(f"{k}={v}" for k, v in asdict(cfg).items())]
    for k, v in res.values.items():
        lines.append(f"{k}: {_jsonable(v)}")
    for c in res.checks:
        lines.append(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']}  {c['residual']:.3g}")
    if "error" in extra:
        lines.append(f"error: {extra['error']}")
    return "\n".join(lines)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    label = args.command
    for key in ("action", "kind"):
        if getattr(args, key, None):
            label += " " + getattr(args, key)
    res = Result(label, cfg)
    t0 = time.perf_counter()
    extra, code = {}, 0
    try:
        args.func(args, cfg, res)
        code = 0 if res.passed else 1
    except StructuralError as exc:
        res.flag(f"structural: {exc}", False)
        extra["error"] = str(exc)
        code = 1
    except (UsageError, sk.InputError, ValueError, KeyError, FileNotFoundError,
            NotImplementedError, json.JSONDecodeError) as exc:
        extra["error"] = f"{type(exc).__name__}: {exc}"
        code = 2
    if not cfg.deterministic:
        extra["elapsed_s"] = round(time.perf_counter() - t0, 4)
    if code == 1 and "failed" not in extra:
        extra["failed"] = [c["name"] for c in res.checks if not c["pass"]]
    print(_render(res, extra, cfg), file=stdout)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
