"""Regenerate the bundled fixtures (manifolds, Hopf files, skeletal data, contexts)."""
import argparse
import json
from pathlib import Path

from morita_ssum import frobenius as fr
from morita_ssum import hopf as hp
from morita_ssum import morita as mo
from morita_ssum import skeletal as sk
from morita_ssum import statesum as ss
from morita_ssum.numerics import COMPLEX_FIELD, EXACT_FIELD

HOPF = {
    "vec_z2.hopf": "F(Z2)",
    "vec_z3.hopf": "F(Z3)",
    "vec_s3.hopf": "F(S3)",
    "rep_z2.hopf": "k[Z2]",
    "rep_s3.hopf": "k[S3]",
}


def write(path: Path, obj):
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    print("wrote", path)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parents[1] / "src/morita_ssum/fixtures"))
    args = ap.parse_args()
    out = Path(args.dir)
    out.mkdir(parents=True, exist_ok=True)

    for name, M in ss.bundled_manifolds().items():
        write(out / f"{name}.json", M.to_json())

    for fname, spec in HOPF.items():
        write(out / fname, hp.hopf_to_json(hp.named_hopf(spec, EXACT_FIELD)))

    for fname, key in [("fib.json", "fibonacci"), ("ising.json", "ising"),
                       ("vec_s3.json", "vec_s3"), ("rep_s3.json", "rep_s3")]:
        write(out / fname, sk.skeletal_to_json(sk.builtin(key)))

    # one F-symbol of the Fibonacci data flipped in sign: the pentagon must catch it
    bad = sk.skeletal_to_json(sk.builtin("fibonacci"))
    target = next(e for e in bad["F"] if e["key"][:4] == ["t", "t", "t", "t"] and e["key"][4:6] == ["t", "t"])
    val = target["val"]
    target["val"] = {"re": -val["re"], "im": -val.get("im", 0.0)} if "re" in val else {"re": -1.0, "im": 0.0}
    bad["name"] = "fibonacci (corrupted)"
    write(out / "corrupted.json", bad)

    for g in ("Z2", "S3"):
        H = hp.named_hopf(f"F({g})", COMPLEX_FIELD)
        F = fr.regular_from_hopf(H, hp.find_integrals(H))
        ctx = mo.build_context(F, name=H.name)
        write(out / f"ctx_vec_{g.lower()}.json", mo.context_report(ctx))
        write(out / f"regular_vec_{g.lower()}.json", fr.frobenius_to_json(
            fr.regular_from_hopf(hp.named_hopf(f"F({g})", EXACT_FIELD),
                                 hp.find_integrals(hp.named_hopf(f"F({g})", EXACT_FIELD))), H.name))


if __name__ == "__main__":
    main()
