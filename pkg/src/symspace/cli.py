"""Command-line front end: ``symspace <command> --input f.json``.

Documents are JSON with rationals written as strings ("3", "1/2", "inf"). Exit codes
are 0 on success, 1 on malformed input and 2 when a checked property is violated.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from typing import Any, Optional

from symspace import __version__
from symspace.duality import (
    associate_norm,
    dual_norm_oracle,
    fatou_check,
    property_C_gap,
    second_associate_norm,
    third_associate_norm,
)
from symspace.errors import SymspaceError
from symspace.measure import StepFunction
from symspace.norms import NormSpec, norm
from symspace.rearrange import (
    cutoff_sequences,
    distribution,
    equimeasurable,
    rearrangement,
    transport_map,
    verify_transport,
)
from symspace.stone import (
    WeightedSpace,
    factor_space,
    from_bits,
    generate_algebra,
    point_ultrafilter,
    ultrafilters,
    zeta_partition,
)
from symspace.verify import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class InputError(Exception):
    pass


def _function(doc: Any, where: str) -> StepFunction:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected a StepFunction object")
    try:
        return StepFunction.from_dict(doc)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _field(doc: Any, name: str) -> Any:
    if not isinstance(doc, dict) or name not in doc:
        raise InputError(f"missing field {name!r}")
    return doc[name]


def _functions(doc: Any, name: str) -> list[StepFunction]:
    items = _field(doc, name)
    if not isinstance(items, list) or not items:
        raise InputError(f"{name}: expected a nonempty list of StepFunction objects")
    return [_function(x, f"{name}[{i}]") for i, x in enumerate(items)]


def _spec(text: Optional[str]) -> NormSpec:
    if text is None:
        raise InputError("--spec is required for this command")
    try:
        return NormSpec.parse(text)
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(f"--spec: {exc}") from None


# -- commands: each returns (document, exit code) --------------------------------------


def cmd_rearrange(doc, args):
    return rearrangement(_function(doc, "input")).to_dict(), EXIT_OK


def cmd_distribution(doc, args):
    return distribution(_function(doc, "input")).to_dict(), EXIT_OK


def cmd_equimeasurable(doc, args):
    f, g = _function(_field(doc, "f"), "f"), _function(_field(doc, "g"), "g")
    return {"equimeasurable": equimeasurable(f, g)}, EXIT_OK


def cmd_transport(doc, args):
    f = _function(doc, "input")
    phi = transport_map(f)
    ok = verify_transport(f, phi)
    out = phi.to_dict()
    out["verified"] = ok
    return out, EXIT_OK if ok else EXIT_VIOLATION


def cmd_cutoff(doc, args):
    f = _function(doc, "input")
    rows = cutoff_sequences(f, _spec(args.spec), args.n_max)
    return {
        "spec": str(_spec(args.spec)),
        "rows": [{"n": n, "top": top.to_dict(), "support": sup.to_dict()} for n, top, sup in rows],
    }, EXIT_OK


def cmd_norm(doc, args):
    spec = _spec(args.spec)
    if isinstance(doc, list):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "spec", "exact", "approx", "infinite"])
        for i, item in enumerate(doc):
            v = norm(_function(item, f"input[{i}]"), spec)
            writer.writerow([i, str(spec), "" if v.exact is None else str(v.exact), repr(v.approx), v.is_infinite])
        return buf.getvalue(), EXIT_OK
    return norm(_function(doc, "input"), spec).to_dict(), EXIT_OK


def _dual_doc(result) -> dict:
    return {"value": result.value.to_dict(), "witness": result.witness.to_dict(), "method": result.method}


def cmd_dual_norm(doc, args):
    g, spec = _function(doc, "input"), _spec(args.spec)
    out = {"spec": str(spec)}
    if args.method in ("analytic", "both"):
        out["analytic"] = _dual_doc(associate_norm(g, spec))
    if args.method in ("oracle", "both"):
        out["oracle"] = _dual_doc(dual_norm_oracle(g, spec))
    return out, EXIT_OK


def cmd_second_dual(doc, args):
    f, spec = _function(doc, "input"), _spec(args.spec)
    return {
        "spec": str(spec),
        "norm": norm(f, spec).to_dict(),
        "second": second_associate_norm(f, spec).to_dict(),
        "third": third_associate_norm(f, spec).to_dict(),
    }, EXIT_OK


def cmd_property_c(doc, args):
    chain = _functions(doc, "chain")
    limit = _function(_field(doc, "limit"), "limit")
    gap = property_C_gap(chain, limit, _spec(args.spec))
    return {k: v.to_dict() for k, v in gap._asdict().items()}, EXIT_OK


def cmd_fatou(doc, args):
    seq = _functions(doc, "sequence")
    limit = _function(_field(doc, "limit"), "limit")
    rep = fatou_check(seq, limit, _spec(args.spec))
    return {
        "liminf_norms": rep.liminf_norms.to_dict(),
        "limit_norm": rep.limit_norm.to_dict(),
        "holds": rep.holds,
        "status": rep.status,
    }, EXIT_OK


def cmd_stone(doc, args):
    n = _field(doc, "n")
    gens = doc.get("generators", [])
    if not isinstance(n, int) or not isinstance(gens, list) or not all(isinstance(g, list) for g in gens):
        raise InputError("n must be an integer and generators a list of point lists")
    try:
        alg = generate_algebra(n, gens)
    except (ValueError, TypeError) as exc:
        raise InputError(f"generators: {exc}") from None
    order = alg.sorted_members()
    us = ultrafilters(alg)
    atoms = zeta_partition(alg).blocks
    out = {
        "members": [from_bits(a) for a in order],
        "atoms": [from_bits(a) for a in atoms],
        "ultrafilters": [{"atom": from_bits(a), "members": sorted(u.selected)} for a, u in zip(atoms, us)],
        "stone_map": [
            {"member": from_bits(a), "ultrafilters": [k for k, u in enumerate(us) if i in u.selected]}
            for i, a in enumerate(order)
        ],
        "point_ultrafilters": [us.index(point_ultrafilter(alg, w)) for w in range(n)],
    }
    if "weights" in doc:
        try:
            factor, proj = factor_space(WeightedSpace(doc["weights"]), alg)
        except (ValueError, TypeError) as exc:
            raise InputError(f"weights: {exc}") from None
        out["factor"] = {"weights": [str(w) for w in factor.weights], "projection": list(proj)}
    return out, EXIT_OK


def cmd_verify(doc, args):
    names = sorted(SUITES, key=lambda s: SUITES[s][2]) if args.suite == "all" else [args.suite]
    if any(name not in SUITES for name in names):
        raise InputError(f"--suite: unknown suite {args.suite!r}; expected 'all' or one of {sorted(SUITES)}")
    results = [run_suite(name, args.n, args.seed) for name in names]
    failed = any(not r.passed for r in results)
    return [r.to_dict() for r in results], EXIT_VIOLATION if failed else EXIT_OK


COMMANDS = {
    "rearrange": (cmd_rearrange, "decreasing rearrangement of a function"),
    "distribution": (cmd_distribution, "distribution function of a function"),
    "equimeasurable": (cmd_equimeasurable, "compare distributions of f and g"),
    "transport": (cmd_transport, "measure-preserving map with f = xi o phi"),
    "cutoff": (cmd_cutoff, "norms of the top and support cutoff residuals"),
    "norm": (cmd_norm, "symmetric norm; a JSON list gives a CSV report"),
    "dual-norm": (cmd_dual_norm, "associate norm, closed form and/or oracle"),
    "second-dual": (cmd_second_dual, "second and third associate norms"),
    "property-c": (cmd_property_c, "sup of norms along an increasing chain vs the limit norm"),
    "fatou": (cmd_fatou, "finite-horizon Fatou diagnostic"),
    "stone": (cmd_stone, "algebra generated by subsets, atoms, ultrafilters and Stone map"),
    "verify": (cmd_verify, "run seeded invariant suites and emit a manifest"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symspace", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", default="-", help="input path, or - for stdin")
        p.add_argument("--output", default="-", help="output path, or - for stdout")
        p.add_argument("--spec", help='norm spec, e.g. "Lp:3/2", "LInf" or a JSON object')
        p.add_argument("--method", choices=["analytic", "oracle", "both"], default="both")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--suite", default="all")
        p.add_argument("--n", type=int, default=None, help="instances per suite")
        p.add_argument("--n-max", type=int, default=10, help="largest cutoff level")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _dump(doc) -> str:
    return doc if isinstance(doc, str) else json.dumps(doc, indent=2, sort_keys=True) + "\n"


def run(command: str, text: str, args: argparse.Namespace) -> tuple[str, int]:
    """Execute one command on raw input text; returns (output text, exit code)."""
    handler = COMMANDS[command][0]
    if command == "verify":
        doc, digest_source = None, json.dumps({"suite": args.suite, "n": args.n, "seed": args.seed}, sort_keys=True)
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        digest_source = json.dumps(doc, sort_keys=True)
    try:
        out, code = handler(doc, args)
    except SymspaceError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    if command == "verify":
        out = {
            "command": "verify",
            "input_digest": hashlib.sha256(digest_source.encode()).hexdigest(),
            "version": __version__,
            "seed": args.seed,
            "outputs": out,
        }
    return _dump(out), code


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = "" if args.command == "verify" else _read(args.input)
        out, code = run(args.command, text, args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(args.output, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
