"""Command-line front end.

Exit codes: 0 success / found, 1 clean negative answer, 2 usage or parse
error, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional

from .detection import (VerificationError, build_graph, build_graph_layered,
                        detect_layered_symmetries, detect_symmetries, export_graph)
from .formula import FormulaSyntaxError, ModalCnf, SignatureError, atoms_of, modal_depth, read_cnf
from .models import ClassSpec, ModelError, entails, format_model, is_closed_under, parse_model, satisfies
from .models.entailment import InternalError
from .permutation import (PermutationError, apply_formula, apply_layered, is_consistent,
                          is_layered_symmetry, is_symmetry, parse_cycles, parse_sequence)

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    spec: ClassSpec = field(default_factory=ClassSpec)
    max_worlds: int = 2
    max_depth: Optional[int] = None
    layered: bool = False
    fmt: str = "human"
    via_symmetry: Optional[str] = None
    include_aux: bool = False
    extra: Optional[str] = None

    def __post_init__(self):
        if self.max_worlds < 1 or (self.max_depth is not None and self.max_depth < 0):
            raise ValueError("bounds must be positive")


def _read(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            return fh.read()
    return arg


def _cnf(arg: str) -> ModalCnf:
    return read_cnf(_read(arg))


def cmd_normalize(cfg: RunConfig, out) -> int:
    phi = _cnf(cfg.inputs[0])
    if cfg.fmt == "machine":
        out.write(f"formula: {phi}\nclauses: {len(phi)}\ndepth: {modal_depth(phi)}\n"
                  f"atoms: {' '.join(sorted(atoms_of(phi)))}\n")
    else:
        out.write(f"{phi}\n")
    return EXIT_OK


def cmd_detect(cfg: RunConfig, out) -> int:
    phi = _cnf(cfg.inputs[0])
    detect = detect_layered_symmetries if cfg.layered else detect_symmetries
    report = detect(phi, include_aux=cfg.include_aux)
    out.write(report.to_text(machine=cfg.fmt == "machine"))
    return EXIT_OK if report.generators else EXIT_NO


def cmd_verify(cfg: RunConfig, out) -> int:
    phi = _cnf(cfg.inputs[0])
    text = _read(cfg.extra)
    if cfg.layered:
        seq = parse_sequence(text)
        if not seq.is_consistent():
            out.write("symmetry: false\nreason: inconsistent permutation\n")
            return EXIT_NO
        ok = is_layered_symmetry(seq, phi)
        image = apply_layered(seq, phi)
    else:
        sigma = parse_cycles(text)
        if not is_consistent(sigma):
            out.write("symmetry: false\nreason: inconsistent permutation\n")
            return EXIT_NO
        ok = is_symmetry(sigma, phi)
        image = apply_formula(sigma, phi)
    out.write(f"symmetry: {str(ok).lower()}\n")
    if not ok:
        out.write(f"image: {image}\n")
    return EXIT_OK if ok else EXIT_NO


def _entail_block(tag: str, result, spec) -> str:
    lines = [f"{tag}entailed: {str(result.entailed).lower()}",
             f"{tag}exact: {str(result.exact).lower()}",
             f"{tag}method: {result.method}"]
    if result.countermodel is not None:
        lines.append(f"{tag}countermodel:")
        lines += ["  " + l for l in format_model(result.countermodel, spec).splitlines()]
    return "\n".join(lines) + "\n"


def cmd_entail(cfg: RunConfig, out) -> int:
    phi, psi = _cnf(cfg.inputs[0]), _cnf(cfg.inputs[1])
    result = entails(phi, psi, cfg.spec, cfg.max_worlds, cfg.max_depth)
    out.write(_entail_block("", result, cfg.spec))
    if cfg.via_symmetry is None:
        return EXIT_OK if result.entailed else EXIT_NO
    sigma = parse_cycles(cfg.via_symmetry)
    if not is_consistent(sigma):
        out.write("via_symmetry: inconsistent permutation\n")
        return EXIT_USAGE
    image = apply_formula(sigma, psi)
    other = entails(phi, image, cfg.spec, cfg.max_worlds, cfg.max_depth)
    applicable = is_symmetry(sigma, phi) and is_closed_under(sigma, cfg.spec)
    out.write(f"image: {image}\n")
    out.write(_entail_block("image_", other, cfg.spec))
    out.write(f"symmetry_applies: {str(applicable).lower()}\n")
    if applicable and result.exact and other.exact and result.entailed != other.entailed:
        out.write("DISAGREEMENT: symmetric entailments differ\n")
        return EXIT_INTERNAL
    return EXIT_OK if result.entailed else EXIT_NO


def cmd_graph(cfg: RunConfig, out) -> int:
    phi = _cnf(cfg.inputs[0])
    build = build_graph_layered if cfg.layered else build_graph
    graph, _ = build(phi, pin_aux=not cfg.include_aux)
    out.write(export_graph(graph, "dot" if cfg.fmt == "human" else cfg.fmt))
    return EXIT_OK


def cmd_eval(cfg: RunConfig, out) -> int:
    model, spec = parse_model(_read(cfg.extra))
    spec = ClassSpec(spec.nominals | cfg.spec.nominals, spec.universal or cfg.spec.universal,
                     spec.at or cfg.spec.at)
    ok = satisfies(model, _cnf(cfg.inputs[0]), spec)
    out.write(f"satisfied: {str(ok).lower()}\n")
    return EXIT_OK if ok else EXIT_NO


COMMANDS = {
    "normalize": cmd_normalize,
    "detect": cmd_detect,
    "verify": cmd_verify,
    "entail": cmd_entail,
    "graph": cmd_graph,
    "eval": cmd_eval,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modsym", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    hint = "formula text, set notation, '@path' or '-' for stdin"

    def common(sp, fmts=("human", "machine")):
        sp.add_argument("--format", choices=fmts, default=fmts[0])
        sp.add_argument("--nominals", default="", help="comma separated nominal atoms")
        sp.add_argument("--universal", action="store_true")
        sp.add_argument("--at", action="store_true")
        sp.add_argument("--include-aux-atoms", action="store_true",
                        help="let symmetries move atoms introduced by the CNF transform")
        return sp

    common(sub.add_parser("normalize", help="print the canonical modal CNF")).add_argument("input", help=hint)
    sp = common(sub.add_parser("detect", help="detect symmetries"))
    sp.add_argument("input", help=hint)
    sp.add_argument("--layered", action="store_true")
    sp = common(sub.add_parser("verify", help="check a permutation against a formula"))
    sp.add_argument("input", help=hint)
    sp.add_argument("permutation", help="cycles, or '[ cyc ; cyc ]' with --layered")
    sp.add_argument("--layered", action="store_true")
    sp = common(sub.add_parser("entail", help="bounded entailment check"))
    sp.add_argument("input", help=hint)
    sp.add_argument("consequent", help=hint)
    sp.add_argument("--max-worlds", type=int, default=2)
    sp.add_argument("--max-depth", type=int, default=None)
    sp.add_argument("--via-symmetry", default=None, metavar="CYCLES")
    sp = common(sub.add_parser("graph", help="export the detection graph"), fmts=("dot", "cel", "human"))
    sp.add_argument("input", help=hint)
    sp.add_argument("--layered", action="store_true")
    sp = common(sub.add_parser("eval", help="evaluate a formula on a model file"))
    sp.add_argument("input", help=hint)
    sp.add_argument("model", help="model text, '@path' or '-'")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = [ns.input] + ([ns.consequent] if hasattr(ns, "consequent") else [])
    nominals = frozenset(n.strip() for n in ns.nominals.split(",") if n.strip())
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        spec=ClassSpec(nominals, ns.universal, ns.at),
        max_worlds=getattr(ns, "max_worlds", 2),
        max_depth=getattr(ns, "max_depth", None),
        layered=getattr(ns, "layered", False),
        fmt=ns.format,
        via_symmetry=getattr(ns, "via_symmetry", None),
        include_aux=ns.include_aux_atoms,
        extra=getattr(ns, "permutation", None) or getattr(ns, "model", None),
    )


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg, out)
    except (FormulaSyntaxError, SignatureError, PermutationError, ModelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VerificationError, InternalError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
