"""Command-line front end: every subcommand prints one versioned JSON report.

Exit codes: 0 definite result, 2 some part of the result is UNKNOWN, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import analysis
from .centre import classify_centre
from .decomposition import decompose
from .diagrams import (
    PhiPresentationSpec,
    RelativePresentation,
    check_diagram,
    diagram_from_json,
    is_phi_reduced,
)
from .errors import (
    KernelMembershipUnknown,
    OracleUnknown,
    ParseError,
    RelPresError,
    UnknownCoset,
)
from .products import (
    AmalgamatedProduct,
    OmegaFamily,
    SemidirectData,
    _descriptor_from_json,
    afp_centre,
    amalgam_tree,
    asp_build,
    prop1_conditions,
)
from .rewriting import GroupDescriptor, Limits
from .selftest import run_all
from .words import Alphabet

SCHEMA = 1
UNDECIDED = (OracleUnknown, UnknownCoset, KernelMembershipUnknown)


@dataclass
class JobConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    kb_rules: int = 2000
    depth: int = 4
    timeout_ms: int | None = None
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.kb_rules <= 0 or self.depth <= 0:
            raise ValueError("limits must be positive")
        if self.timeout_ms is not None and self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")

    @property
    def limits(self) -> Limits:
        return Limits(max_rules=self.kb_rules, timeout_ms=self.timeout_ms)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "kb_rules": self.kb_rules,
            "depth": self.depth,
            "timeout_ms": self.timeout_ms,
            "seed": self.seed,
        }


def _names(text: str | None) -> tuple[str, ...]:
    return tuple(s.strip() for s in (text or "").split(",") if s.strip())


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg}", e.lineno, e.colno) from None


def _group(args) -> GroupDescriptor:
    if args.group:
        return GroupDescriptor.parse(_read(args.group))
    if args.abelian:
        return GroupDescriptor.free_abelian(_names(args.abelian))
    if args.free:
        return GroupDescriptor.free(_names(args.free))
    raise ParseError("give the coefficient group with --group, --free or --abelian")


def _word(args, G: GroupDescriptor):
    return Alphabet(G.generators, _names(args.vars)).parse(args.word)


# --------------------------------------------------------------------------
# commands


def cmd_classify(args, cfg: JobConfig) -> dict:
    G = _group(args)
    w = _word(args, G)
    out = {"classification": analysis.classify(w).to_json()}
    gu = analysis.generalised_unimodular_free_T(w)
    out["generalised_unimodular_witness"] = gu.to_json()
    return out


def cmd_decompose(args, cfg: JobConfig) -> dict:
    G = _group(args)
    report = decompose(_word(args, G), G, cfg.limits, depth=cfg.depth, radius=args.radius)
    return report.to_json()


def cmd_centre(args, cfg: JobConfig) -> dict:
    G = _group(args)
    w = _word(args, G)
    variables = _names(args.vars)
    if args.T:
        T = GroupDescriptor.parse(_read(args.T))
        if T.generators != variables:
            raise ParseError(f"--T generators {list(T.generators)} differ from --vars {list(variables)}")
    elif args.T_abelian:
        T = GroupDescriptor.free_abelian(variables)
    else:
        T = len(variables)
    v = classify_centre(G, T, w, require_hypotheses=args.require_hypotheses, limits=cfg.limits)
    return {"centre": v.to_json()}


def _presentation(args, data: dict) -> RelativePresentation:
    if "presentation" in data:
        p = data["presentation"]
        H = _descriptor_from_json(p["H"])
        return RelativePresentation.parse(H, tuple(p.get("variables", ["t"])), list(p["relators"]))
    if not args.relator:
        raise ParseError("diagram has no 'presentation' block; give --relator")
    H = _group(args)
    return RelativePresentation.parse(H, _names(args.vars) or ("t",), args.relator)


def cmd_diagram_check(args, cfg: JobConfig) -> dict:
    data = _load_json(args.file)
    d = diagram_from_json(data)
    p = _presentation(args, data)
    out = {"diagram": check_diagram(d, p, cfg.limits).to_json()}
    if "phi" in data:
        ph = data["phi"]
        H = p.H
        spec = PhiPresentationSpec(
            H,
            tuple(H.word(s) for s in ph["P"]),
            tuple(H.word(s) for s in ph["images"]),
            p.relators,
            p.variables[0],
        )
        out["phi_reduced"] = is_phi_reduced(d, spec, depth=cfg.depth).to_json()
    return out


def _verify_family(data: dict, cfg: JobConfig) -> dict:
    fam = OmegaFamily.from_json(data)
    report = prop1_conditions(fam, depth=cfg.depth, limits=cfg.limits)
    out = {"family": report.to_json(fam)}
    if report.combinatorial and len(fam.omega) >= 2:
        res = amalgam_tree(fam)
        out["tree"] = res.tree.render(fam)
    return out


def _verify_asp(data: dict, cfg: JobConfig) -> dict:
    A = _descriptor_from_json(data["A"])
    B = _descriptor_from_json(data["B"])
    phi = tuple(tuple(B.word(s) for s in row) for row in data["phi"])
    N = tuple(A.word(s) for s in data.get("N", ()))
    psi = tuple(B.word(s) for s in data.get("psi", ()))
    sd = SemidirectData(A, B, phi, N, psi, limits=cfg.limits)
    return {"asp": asp_build(sd).to_json()}


def _verify_afp(data: dict, cfg: JobConfig) -> dict:
    A = _descriptor_from_json(data["A"])
    B = _descriptor_from_json(data["B"])
    ap = AmalgamatedProduct.cyclic(A, B, A.word(data["a"]), B.word(data["b"]), limits=cfg.limits)
    return {"afp_centre": afp_centre(ap).to_json(ap)}


def cmd_products_verify(args, cfg: JobConfig) -> dict:
    data = _load_json(args.file)
    if not isinstance(data, dict):
        raise ParseError("products file must hold a JSON object")
    out: dict = {}
    if "I" in data:
        out.update(_verify_family(data, cfg))
    if "family" in data:
        out.update(_verify_family(data["family"], cfg))
    if "asp" in data:
        out.update(_verify_asp(data["asp"], cfg))
    if "afp" in data:
        out.update(_verify_afp(data["afp"], cfg))
    if not out:
        raise ParseError("products file needs one of 'I', 'family', 'asp', 'afp'")
    return out


def cmd_selftest(args, cfg: JobConfig) -> dict:
    only = [int(x) for x in _names(args.only)] or None
    results = run_all(cfg.seed, only)
    return {"criteria": [r.to_json() for r in results], "passed": all(r.passed for r in results)}


# --------------------------------------------------------------------------
# driver


def _has_unknown(obj) -> bool:
    if isinstance(obj, str):
        return obj == "UNKNOWN"
    if isinstance(obj, dict):
        return any(_has_unknown(v) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return any(_has_unknown(v) for v in obj)
    return False


def _add_group_args(p: argparse.ArgumentParser, word: bool = True) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--group", help="presentation file for the coefficient group G")
    g.add_argument("--free", help="G free on these comma-separated generators")
    g.add_argument("--abelian", help="G free abelian on these comma-separated generators")
    p.add_argument("--vars", default="t", help="comma-separated variables (default: t)")
    if word:
        p.add_argument("word", help="the relator, e.g. 'g t h'")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--limits-kb-rules", type=int, default=2000, help="rule cap for completion")
    p.add_argument("--depth", type=int, default=4, help="word length for bounded checks")
    p.add_argument("--timeout-ms", type=int, default=None, help="time cap per completion")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--output", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relpres", description="One-relator relative presentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="unimodular / generalised unimodular / complexity test")
    _add_group_args(p)
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="structural decomposition for a generalised unimodular relator")
    _add_group_args(p)
    p.add_argument("--radius", type=int, default=1, help="coset window radius")
    _add_common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("centre", help="classify the centre of the quotient")
    _add_group_args(p)
    tg = p.add_mutually_exclusive_group()
    tg.add_argument("--T", help="presentation file for T (generators must equal --vars)")
    tg.add_argument("--T-abelian", action="store_true", help="T free abelian on --vars")
    p.add_argument("--require-hypotheses", action="store_true", help="error instead of UNKNOWN")
    _add_common(p)
    p.set_defaults(func=cmd_centre)

    p = sub.add_parser("diagram", help="diagram commands")
    dsub = p.add_subparsers(dest="action", required=True)
    q = dsub.add_parser("check", help="validate a diagram JSON file")
    q.add_argument("file")
    _add_group_args(q, word=False)
    q.add_argument("--relator", action="append", help="relator over H * F(vars); repeatable")
    _add_common(q)
    q.set_defaults(func=cmd_diagram_check)

    p = sub.add_parser("products", help="product commands")
    psub = p.add_subparsers(dest="action", required=True)
    q = psub.add_parser("verify", help="check a family, semidirect or amalgam JSON file")
    q.add_argument("file")
    _add_common(q)
    q.set_defaults(func=cmd_products_verify)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion numbers")
    _add_common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, dict, str | None]:
    """Run one job; returns (exit code, report, output path)."""
    args = build_parser().parse_args(argv)
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    inputs = [v for k in ("file", "group", "T") if (v := getattr(args, k, None))]
    report: dict = {"schema": SCHEMA}
    try:
        cfg = JobConfig(
            command, inputs, args.limits_kb_rules, args.depth, args.timeout_ms, args.seed, args.output
        )
    except ValueError as e:
        report.update({"config": None, "error": {"code": "BAD_CONFIG", "message": str(e)}})
        return 1, report, args.output
    report["config"] = cfg.to_json()
    try:
        result = args.func(args, cfg)
    except UNDECIDED as e:
        report["result"] = {"verdict": "UNKNOWN", "reason": e.to_json()}
        return 2, report, cfg.output
    except RelPresError as e:
        report["error"] = e.to_json()
        return 1, report, cfg.output
    except (KeyError, TypeError, ValueError) as e:
        report["error"] = {"code": "PARSE_ERROR", "message": f"{type(e).__name__}: {e}"}
        return 1, report, cfg.output
    report["result"] = result
    if command == "selftest":
        return (0 if result["passed"] else 1), report, cfg.output
    return (2 if _has_unknown(result) else 0), report, cfg.output


def main(argv: Sequence[str] | None = None) -> int:
    code, report, output = run(argv)
    text = json.dumps(report, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
