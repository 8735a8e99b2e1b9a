"""Command-line front end: ``sg-galois COMMAND [--catalog NAME | --file PATH] ...``.

Exit codes: 0 success, 1 domain failure, 2 usage or parse error, 3 guardrail.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import psg as psg_mod
from .cohomology import MAX_COBOUNDARY_EXP, MAX_H2_EXP, cohomology_report
from .errors import GuardrailError, MalformedPsgError, PreconditionError, SgError
from .galois import MAX_STANDARD_N, gal_group, galois_report, is_standard, orderings_via_galois
from .ktheory import is_k_stable, relation_module
from .psg import Psg, catalog, catalog_names, orderings, validate

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
DEFAULT_MAX_ORDER = {"galois": 20, "standard": 12, "cohomology": MAX_COBOUNDARY_EXP}

COMMANDS = ("validate", "info", "galois", "orderings", "standard", "cohomology", "catalog-list")


@dataclass(frozen=True)
class RunConfig:
    command: str
    catalog: Optional[str] = None
    file: Optional[str] = None
    json: bool = False
    require_special: bool = False
    standard: bool = False
    bases: int = 0
    seed: int = 0
    max_order: Optional[int] = None

    def limit(self) -> int:
        if self.max_order is not None:
            return self.max_order
        return DEFAULT_MAX_ORDER.get(self.command, 20)


class UsageError(SgError):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sg-galois", description="Galois groups of finite pre-special groups.")
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_argument_group("input")
    src.add_argument("--catalog", metavar="NAME", help="catalog entry, e.g. FAN2 or PRODUCT(FAN2,F3LIKE)")
    src.add_argument("--file", metavar="PATH", help="JSON file with basis_size, minus_one, value_sets")
    ap.add_argument("--json", action="store_true", help="emit a JSON report")
    ap.add_argument("--require-special", action="store_true", help="validate also checks SG6")
    ap.add_argument("--standard", action="store_true", help="galois: run the standardness check")
    ap.add_argument("--bases", type=int, default=0, metavar="K", help="galois: K seeded base-change checks")
    ap.add_argument("--seed", type=int, default=0, metavar="N")
    ap.add_argument("--max-order", type=int, default=None, metavar="E", help="guardrail: allow |Gal| up to 2^E")
    return ap


def load_psg(cfg: RunConfig) -> Psg:
    path = cfg.file
    if cfg.catalog is not None and os.path.isfile(cfg.catalog):
        print(f"warning: {cfg.catalog!r} is an existing file; reading it instead of the catalog", file=sys.stderr)
        path = path or cfg.catalog
    elif cfg.catalog is not None and path is not None:
        print("warning: both --file and --catalog given; the file wins", file=sys.stderr)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise MalformedPsgError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
        return Psg.from_json(doc)
    if cfg.catalog is None:
        raise UsageError("one of --catalog or --file is required")
    try:
        return catalog(cfg.catalog)
    except KeyError:
        raise UsageError(f"unknown catalog entry {cfg.catalog!r}; see catalog-list") from None


def _require_valid(p: Psg) -> None:
    rep = validate(p)
    if not rep.ok:
        raise PreconditionError(f"not a pre-special group: axioms {', '.join(rep.axioms_failed())} fail")


def _guard(p: Psg, cfg: RunConfig) -> None:
    G = gal_group(p)
    if G.order_exp > cfg.limit():
        raise GuardrailError(f"{cfg.command} (|Gal| exponent)", G.order_exp, cfg.limit())


# commands --------------------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> tuple[int, dict]:
    p = load_psg(cfg)
    rep = validate(p, require_special=cfg.require_special).to_json()
    rep["name"] = p.name
    return (EXIT_OK if rep["valid"] else EXIT_DOMAIN), rep


def cmd_info(cfg: RunConfig) -> tuple[int, dict]:
    p = load_psg(cfg)
    Q = relation_module(p)
    rep = {
        "name": p.name,
        "basis_size": p.n,
        "size": p.size,
        "minus_one": p.fmt(p.minus_one),
        "valid": validate(p).ok,
        "k2_dim": Q.k2_dim,
        "relations": [str(q) for q in Q.basis_polys()],
        "k_stable": is_k_stable(p),
        "formally_real": psg_mod.is_formally_real(p),
        "pythagorean": psg_mod.is_pythagorean(p),
        "reduced": psg_mod.is_reduced(p),
        "gal_order_exp": p.n + Q.dim,
    }
    return EXIT_OK, rep


def cmd_galois(cfg: RunConfig) -> tuple[int, dict]:
    p = load_psg(cfg)
    _require_valid(p)
    _guard(p, cfg)
    rep = galois_report(p, standard=False, bases=cfg.bases, seed=cfg.seed)
    code = EXIT_OK
    if cfg.standard:
        std = _standard(p, cfg)
        rep["standard"] = std
        code = EXIT_OK if std["standard"] else EXIT_DOMAIN
    if cfg.bases and not rep["base_change"]["all_ok"]:
        code = EXIT_DOMAIN
    return code, rep


def _standard(p: Psg, cfg: RunConfig) -> dict:
    max_n = MAX_STANDARD_N if cfg.max_order is None else max(MAX_STANDARD_N, p.n)
    return is_standard(p, max_n=max_n).to_json()


def cmd_orderings(cfg: RunConfig) -> tuple[int, dict]:
    p = load_psg(cfg)
    _require_valid(p)
    psg_side = [str(c) for c in orderings(p)]
    gal_side = [str(c) for c in orderings_via_galois(gal_group(p))]
    rep = {"name": p.name, "orderings": psg_side, "via_galois": gal_side, "agree": psg_side == gal_side}
    return (EXIT_OK if rep["agree"] else EXIT_DOMAIN), rep


def cmd_standard(cfg: RunConfig) -> tuple[int, dict]:
    p = load_psg(cfg)
    _require_valid(p)
    _guard(p, cfg)
    rep = {"name": p.name, **_standard(p, cfg)}
    return (EXIT_OK if rep["standard"] else EXIT_DOMAIN), rep


def cmd_cohomology(cfg: RunConfig) -> tuple[int, dict]:
    p = load_psg(cfg)
    _require_valid(p)
    _guard(p, cfg)
    return EXIT_OK, cohomology_report(p, max_exp=cfg.limit(), h2_max_exp=MAX_H2_EXP)


def cmd_catalog_list(cfg: RunConfig) -> tuple[int, dict]:
    entries = []
    for name in catalog_names():
        try:
            n = catalog(name).n
        except KeyError:
            n = None
        entries.append({"name": name, "basis_size": n})
    return EXIT_OK, {"catalog": entries}


HANDLERS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "galois": cmd_galois,
    "orderings": cmd_orderings,
    "standard": cmd_standard,
    "cohomology": cmd_cohomology,
    "catalog-list": cmd_catalog_list,
}


# output ----------------------------------------------------------------------------


def dumps(rep: dict) -> str:
    return json.dumps(rep, sort_keys=True, indent=2)


def render_text(rep, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(rep, dict):
        for k in sorted(rep):
            v = rep[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(rep, list):
        for v in rep:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(rep)}")
    return "\n".join(lines)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v == [] or v == {}:
        return "none"
    if v == "":
        return '""'
    return str(v)


def run(cfg: RunConfig) -> tuple[int, str]:
    code, rep = HANDLERS[cfg.command](cfg)
    return code, dumps(rep) if cfg.json else render_text(rep)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = RunConfig(
        command=args.command,
        catalog=args.catalog,
        file=args.file,
        json=args.json,
        require_special=args.require_special,
        standard=args.standard,
        bases=args.bases,
        seed=args.seed,
        max_order=args.max_order,
    )
    try:
        code, out = run(cfg)
    except GuardrailError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (MalformedPsgError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
