"""Command-line interface: ``semidual <command> ...``.

Exit codes: ``check-sd`` returns 0 (certified), 1 (certified to bound) or
2 (refuted).  Every command returns 64 on usage errors and 65 on
unreadable input files.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .algebra import AlgebraError, LocalAlgebra, RingFileError, load_ring, regular_module, socle, tensor_algebras
from .formats import load_module
from .lattice import ChainSpec, build_lattice, cross_validate, staged_dot, symbolic_base_change, to_dot
from .modcat import HomSpace, ModuleError, RModule, is_isomorphic, residue_field
from .semidualizing import (
    Status,
    base_change,
    bass_series,
    catalog_report,
    certify_semidualizing,
    default_bound,
    enumerate_semidualizing,
    external_tensor,
    hom_bass_series,
    is_dualizing,
    is_gorenstein,
    omega,
)

EXIT_USAGE = 64
EXIT_INPUT = 65
CHECK_SD_EXIT = {Status.CERTIFIED: 0, Status.CERTIFIED_TO_BOUND: 1, Status.REFUTED: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    ext_bound: int | None = None
    trunc: int = 20
    gen_bound: int = 3
    format: str = "text"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for key in ("ext_bound", "gen_bound"):
            val = getattr(self, key)
            if val is not None and val < 1:
                raise UsageError(f"--{key.replace('_', '-')} must be positive")
        if self.trunc < 0:
            raise UsageError("--trunc must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "command": self.command, "inputs": self.inputs, "ext_bound": self.ext_bound,
            "trunc": self.trunc, "gen_bound": self.gen_bound, "format": self.format,
            "seed": self.seed, **self.extra,
        }


def _resolve_module(spec: str, algebra: LocalAlgebra) -> RModule:
    if spec == "omega":
        return omega(algebra)
    if spec == "regular":
        return regular_module(algebra)
    if spec == "residue":
        return residue_field(algebra)
    return load_module(spec, algebra)


def _envelope(cfg: RunConfig, body: dict) -> dict:
    return {"engine": {"name": "semidual", "version": __version__}, "config": cfg.as_dict(), **body}


def _text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in doc.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text(val, indent + 1))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                lines.append(_text(item, indent + 1).replace("  " * (indent + 1), "  " * indent + "- ", 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(val) if isinstance(val, (list, bool)) or val is None else val}")
    return "\n".join(lines)


def _emit(cfg: RunConfig, body: dict, out):
    doc = _envelope(cfg, body)
    if cfg.format == "json":
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        out.write(_text(doc) + "\n")


def cmd_ring_info(cfg: RunConfig, out) -> int:
    alg = load_ring(cfg.inputs[0])
    series = bass_series(alg, cfg.trunc, cfg.seed)
    body = {
        "ring": {"name": alg.name, "p": alg.p, "dim": alg.dim, "basis": list(alg.labels),
                 "maxideal_power_dims": alg.maxideal_power_dims()},
        "socle_dim": int(socle(alg).shape[1]),
        "bass_series": {"coeffs": series.coeffs, "trunc": series.trunc, "method": series.method},
        "gorenstein": is_gorenstein(alg),
    }
    _emit(cfg, body, out)
    return 0


def cmd_check_sd(cfg: RunConfig, out) -> int:
    alg = load_ring(cfg.inputs[0])
    mod = _resolve_module(cfg.extra["module"], alg)
    bound = cfg.ext_bound or default_bound(alg)
    cert = certify_semidualizing(mod, bound, cfg.seed)
    body = {
        "module": {"name": mod.name, "dim": mod.dim},
        "certificate": {"status": cert.status.value, "homothety_bijective": cert.homothety_iso,
                        "ext_checked_to": cert.ext_checked_to,
                        "periodicity": list(cert.periodicity) if cert.periodicity else None,
                        "ext_witness": list(cert.ext_witness) if cert.ext_witness else None,
                        "reason": cert.reason},
    }
    if cert.status is not Status.REFUTED:
        body["certificate"]["dualizing"] = is_dualizing(mod, cfg.seed)
    _emit(cfg, body, out)
    return CHECK_SD_EXIT[cert.status]


def cmd_enumerate(cfg: RunConfig, out) -> int:
    alg = load_ring(cfg.inputs[0])
    cat = enumerate_semidualizing(alg, cfg.gen_bound, cfg.ext_bound, cfg.seed)
    _emit(cfg, {"catalog": catalog_report(cat)}, out)
    return 0


def cmd_lattice(cfg: RunConfig, out) -> int:
    n = cfg.extra["n"]
    if n < 0:
        raise UsageError("lattice length must be nonnegative")
    if cfg.extra.get("staged"):
        out.write(staged_dot(n))
        return 0
    lat = build_lattice(ChainSpec(n))
    if cfg.extra.get("count_only"):
        out.write(f"nodes={len(lat.nodes)} relations={lat.relation_count}\n")
        return 0
    if cfg.format == "dot":
        out.write(to_dot(lat, hasse=cfg.extra.get("hasse", False)))
        return 0
    edges = lat.hasse() if cfg.extra.get("hasse") else lat.relations(strict=True)
    body = {
        "nodes": [{"subset": str(s), "word": str(lat.words[s])} for s in lat.nodes] if n <= 6 else len(lat.nodes),
        "relations": lat.relation_count,
        "edges": [[str(a), str(b)] for a, b in edges] if n <= 6 else len(edges),
    }
    _emit(cfg, body, out)
    return 0


def _distinct(mods: list[RModule], seed: int) -> list[RModule]:
    out: list[RModule] = []
    for m in mods:
        if all(is_isomorphic(m, o, seed=seed).verdict == "no" for o in out):
            out.append(m)
    return out


def cmd_base_change(cfg: RunConfig, out) -> int:
    r, t = load_ring(cfg.inputs[0]), load_ring(cfg.inputs[1])
    s = tensor_algebras(r, t, name=f"{r.name}#{t.name}")
    cat = enumerate_semidualizing(r, cfg.gen_bound, cfg.ext_bound, cfg.seed)
    hb = hom_bass_series(r, t, cfg.trunc, cfg.seed)
    gorenstein = hb.gorenstein
    bound = cfg.ext_bound or default_bound(s)
    changed = [base_change(rec.representative, t, s) for rec in cat.records]
    cands = list(changed)
    if not gorenstein:
        w = omega(s)
        for m in changed:
            d = HomSpace(m, w).module
            d.name = f"Hom({m.name},omega_S)"
            cands.append(d)
    exhibited = []
    for m in _distinct(cands, cfg.seed):
        cert = certify_semidualizing(m, bound, cfg.seed)
        exhibited.append({"module": m.name, "dim": m.dim, "status": cert.status.value, "reason": cert.reason})
    certified = [e for e in exhibited if e["status"] != Status.REFUTED.value]
    lower, trace = symbolic_base_change(cat.count, gorenstein)
    body = {
        "source": {"ring": r.name, "dim": r.dim, "classes": cat.count, "bounds": {"gen_bound": cat.gen_bound}},
        "fibre": {"ring": t.name, "dim": t.dim, "socle_dim": int(socle(t).shape[1]), "gorenstein": gorenstein},
        "target": {"ring": s.name, "dim": s.dim},
        "bass": {"I_phi": hb.series.coeffs, "I_R": hb.source.coeffs, "I_S": hb.target.coeffs,
                 "I_S_method": hb.target.method, "product_identity": hb.product_identity},
        "exhibited": exhibited,
        "certified_distinct": len(certified),
        "predicted_lower_bound": lower if not gorenstein else None,
        "bound_met": (len(certified) >= lower) if not gorenstein else None,
        "trace": trace,
    }
    _emit(cfg, body, out)
    return 0


def _builtin_chain(alg: LocalAlgebra, fibre: LocalAlgebra | None) -> tuple[dict[str, RModule], list[str]]:
    if fibre is None:
        if is_gorenstein(alg):
            return {"C0": regular_module(alg)}, ["C0"]
        return {"C0": regular_module(alg), "C1": omega(alg)}, ["C0", "C1"]
    s = tensor_algebras(alg, fibre)
    chain = {
        "C0": external_tensor(regular_module(alg), regular_module(fibre), s),
        "C1": external_tensor(omega(alg), regular_module(fibre), s),
        "C2": external_tensor(omega(alg), omega(fibre), s),
    }
    return chain, ["C0", "C1", "C2"]


def cmd_cross_validate(cfg: RunConfig, out) -> int:
    alg = load_ring(cfg.inputs[0])
    fibre = load_ring(cfg.extra["fibre"]) if cfg.extra.get("fibre") else None
    if cfg.extra.get("chain"):
        if fibre is not None:
            raise UsageError("--chain and --fibre cannot be combined")
        labels = [f"C{i}" for i in range(len(cfg.extra["chain"]))]
        chain = {lab: _resolve_module(spec, alg) for lab, spec in zip(labels, cfg.extra["chain"])}
    else:
        chain, labels = _builtin_chain(alg, fibre)
    spec = ChainSpec(len(labels) - 1, tuple(labels))
    res = cross_validate(spec, chain, cfg.ext_bound, cfg.seed)
    body = {
        "chain": {lab: {"dim": chain[lab].dim} for lab in labels},
        "chain_ok": res.chain_ok,
        "nesting_ok": res.nesting_ok,
        "classes": {str(k): v for k, v in res.certificates.items()},
        "order_pairs_agreeing": f"{sum(res.order_agree.values())}/{len(res.order_agree)}",
        "auslander_pairs_agreeing": f"{sum(res.auslander_agree.values())}/{len(res.auslander_agree)}",
        "mismatches": res.mismatches,
    }
    _emit(cfg, body, out)
    return 0 if res.ok else 1


COMMANDS = {
    "ring-info": cmd_ring_info,
    "check-sd": cmd_check_sd,
    "enumerate": cmd_enumerate,
    "lattice": cmd_lattice,
    "base-change": cmd_base_change,
    "cross-validate": cmd_cross_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ext-bound", type=int, default=None, help="Ext/Tor degrees to check (default 2 dim R)")
    common.add_argument("--trunc", type=int, default=20, help="Bass series truncation")
    common.add_argument("--gen-bound", type=int, default=3, help="generator bound for enumeration")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized isomorphism search")
    common.add_argument("--format", choices=["text", "json", "dot"], default=None,
                        help="output format (lattice defaults to dot, other commands to text)")

    parser = _Parser(prog="semidual", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"semidual {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ring-info", parents=[common], help="dimension, socle, Bass series, Gorenstein verdict")
    p.add_argument("ring")
    p = sub.add_parser("check-sd", parents=[common], help="certify a module as semidualizing")
    p.add_argument("ring")
    p.add_argument("--module", default="regular", help="module file, or omega | regular | residue")
    p = sub.add_parser("enumerate", parents=[common], help="bounded search for semidualizing classes")
    p.add_argument("ring")
    p = sub.add_parser("lattice", parents=[common], help="subset lattice of a chain of length n")
    p.add_argument("n", type=int)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--hasse", action="store_true", help="covering pairs only")
    p.add_argument("--staged", action="store_true", help="covering diagrams for lengths 0..n (DOT)")
    p.add_argument("--dot", action="store_const", const="dot", dest="format", help="same as --format dot")
    p = sub.add_parser("base-change", parents=[common], help="classes before and after R -> R (x) T")
    p.add_argument("ring")
    p.add_argument("fibre")
    p = sub.add_parser("cross-validate", parents=[common], help="subset calculus against the engine")
    p.add_argument("ring")
    p.add_argument("--fibre", help="use the product ring with this fibre and its built-in length-2 chain")
    p.add_argument("--chain", help="comma-separated chain C0,...,Cn (files or omega | regular)")
    return parser


def _configure_logging():
    level = os.environ.get("SEMIDUAL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None, out=None) -> int:
    _configure_logging()
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    extra = {}
    inputs = [getattr(args, k) for k in ("ring", "fibre") if isinstance(getattr(args, k, None), str)]
    if args.command == "check-sd":
        extra["module"] = args.module
    elif args.command == "lattice":
        extra.update(n=args.n, count_only=args.count_only, hasse=args.hasse, staged=args.staged)
        inputs = []
    elif args.command == "cross-validate":
        inputs = [args.ring]
        extra.update(fibre=args.fibre, chain=args.chain.split(",") if args.chain else None)
    fmt = args.format or ("dot" if args.command == "lattice" else "text")
    if fmt == "dot" and args.command != "lattice":
        print("semidual: error: dot output is only available for lattice", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = RunConfig(args.command, inputs, args.ext_bound, args.trunc, args.gen_bound, fmt, args.seed, extra)
        return COMMANDS[args.command](cfg, out)
    except UsageError as exc:
        print(f"semidual: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RingFileError, AlgebraError, ModuleError, OSError) as exc:
        print(f"semidual: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
