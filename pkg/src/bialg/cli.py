"""Command-line entry point: check, construct, census, catalog, isom, discover, export-system."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .axioms import CheckReport, check_bundle, export_system
from .catalog import CatalogError, census, entries, export_all, get, verify_catalog
from .classify import BudgetExceededError, SearchError, discover_fp, isom_search_fp
from .constructions import (
    ConstructionError,
    PostconditionError,
    UnitalAlgebraInput,
    build_2as,
    build_2b,
    build_22b,
    kaplansky_k1,
    kaplansky_k2,
)
from .core import Bundle, BundleKind, StructureError
from .fsutils import PathUtils, ValidationError, scan_structure_files
from .scalars import Field, FieldError, format_scalar
from .settings import get_settings, get_settings_manager
from .structfile import StructureFile, StructureFileError, dumps, load, save

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_POSTCONDITION = 3

_KIND_ALIASES = {
    "algebra": BundleKind.ALGEBRA,
    "coalgebra": BundleKind.COALGEBRA,
    "bialgebra": BundleKind.BIALGEBRA,
    "infinitesimal": BundleKind.INFINITESIMAL,
    "2as": BundleKind.TWO_AS,
    "2b": BundleKind.TWO_B,
    "22b": BundleKind.TWO_TWO_B,
}


class CommandError(Exception):
    """Raised by a command to stop with a message and an exit code."""

    def __init__(self, message: str, exit_code: int = EXIT_INPUT) -> None:
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


def _emit(args: argparse.Namespace, human: List[str], machine: Dict[str, Any]) -> None:
    """Print the human report, or JSON with --machine-readable."""
    if args.machine_readable:
        print(json.dumps(machine, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in human:
            print(line)


def _field_override(args: argparse.Namespace) -> Optional[Field]:
    return Field.parse(args.field) if args.field else None


def _load_bundle(path: str, fld: Optional[Field]) -> Tuple[str, Bundle]:
    sf = load(Path(path))
    bundle = sf.bundle.over(fld) if fld is not None else sf.bundle
    return sf.name or Path(path).stem, bundle


def _report_lines(name: str, kind: str, report: CheckReport) -> List[str]:
    lines = [f"{name}: {kind} {report.summary()}"]
    for r in report.residuals:
        where = f"{r.scope} " if r.scope else ""
        index = ",".join(str(i) for i in r.index)
        lines.append(f"  {where}{r.axiom}[{index}] = {format_scalar(r.value)}")
    return lines


# check


def _check_one(path: Path, args: argparse.Namespace) -> Tuple[CheckReport, List[str], Dict[str, Any]]:
    name, bundle = _load_bundle(str(path), _field_override(args))
    kind = _KIND_ALIASES[args.kind] if args.kind else bundle.kind
    theta = None
    if kind is BundleKind.INFINITESIMAL:
        raw = args.theta if args.theta is not None else bundle.theta
        theta = bundle.field(raw if raw is not None else get_settings().checks.default_theta)
    elif args.theta is not None:
        raise CommandError(f"--theta only applies to infinitesimal checks, not {kind.value}")
    bundle = Bundle(kind, bundle.mults, bundle.comults, theta)

    report = check_bundle(bundle)
    machine = {"name": name, "kind": kind.value, "field": bundle.field.tag, **report.to_dict()}
    if theta is not None:
        machine["theta"] = format_scalar(theta)
    return report, _report_lines(name, kind.value, report), machine


def cmd_check(args: argparse.Namespace) -> int:
    target = Path(args.file)
    if not target.is_dir():
        report, human, machine = _check_one(target, args)
        _emit(args, human, machine)
        return EXIT_OK if report.passed else EXIT_FAILED

    files = scan_structure_files(target, recursive=args.recursive)
    if not files:
        raise CommandError(f"No structure files in {target}")
    human: List[str] = []
    results = []
    passed = True
    for path in files:
        report, lines, machine = _check_one(path, args)
        passed = passed and report.passed
        human += lines
        results.append({"path": str(path), **machine})
    human.append(f"{sum(1 for r in results if r['passed'])}/{len(results)} structures passed")
    _emit(args, human, {"passed": passed, "results": results})
    return EXIT_OK if passed else EXIT_FAILED


# construct


def _algebra_input(path: str, fld: Optional[Field]) -> UnitalAlgebraInput:
    _, bundle = _load_bundle(path, fld)
    if len(bundle.mults) != 1:
        raise CommandError(f"{path}: expected a single multiplication, found {len(bundle.mults)}")
    try:
        return UnitalAlgebraInput(bundle.mults[0])
    except StructureError as e:
        raise ConstructionError(f"{path}: {e.message}") from e


def _output_base(args: argparse.Namespace, default_name: str) -> Path:
    if args.output:
        return Path(args.output)
    directory = get_settings().output.default_output_dir or "."
    return Path(directory) / f"{PathUtils.sanitize_filename(default_name)}.json"


def cmd_construct(args: argparse.Namespace) -> int:
    fld = _field_override(args)
    inputs = [_algebra_input(path, fld) for path in args.inputs]
    if args.kind in ("k1", "k2"):
        if len(inputs) != 1:
            raise CommandError(f"construct {args.kind} takes one input algebra, got {len(inputs)}")
        builder = kaplansky_k1 if args.kind == "k1" else kaplansky_k2
        m, c = builder(inputs[0])
        outputs = [Bundle(BundleKind.BIALGEBRA, (m,), (c,))]
    else:
        if len(inputs) != 2:
            raise CommandError(f"construct {args.kind} takes two input algebras, got {len(inputs)}")
        if args.kind == "2as":
            outputs = [build_2as(inputs[0], inputs[1])]
        elif args.kind == "22b":
            outputs = [build_22b(inputs[0], inputs[1])]
        else:
            outputs = list(build_2b(inputs[0], inputs[1]))

    stem = "_".join(Path(p).stem for p in args.inputs)
    base = _output_base(args, f"{args.kind}_{stem}")
    policy = get_settings().output.overwrite_policy
    human: List[str] = []
    written: List[Dict[str, Any]] = []
    for index, bundle in enumerate(outputs, start=1):
        target = base if len(outputs) == 1 else base.with_name(f"{base.stem}_b{index}{base.suffix}")
        name = target.stem
        report = check_bundle(bundle)
        path = save(StructureFile(name, bundle), target, policy)
        human += _report_lines(name, bundle.kind.value, report)
        human.append(f"  written to {path}" if path is not None else f"  skipped existing {target}")
        written.append({"name": name, "path": str(path) if path else None, **report.to_dict()})
    _emit(args, human, {"construction": args.kind, "outputs": written})
    return EXIT_OK


# census


def cmd_census(args: argparse.Namespace) -> int:
    table = census(args.dim)
    data = table.to_dict()
    published = data["published"]
    human = [f"Census in dimension {args.dim} (computed / published)"]

    def row(label: str, got: int, expected: Optional[int]) -> str:
        mark = "ok" if got == expected else "DIFFERS"
        return f"  {label:<38} {got:>5} / {expected if expected is not None else '-':>5}  {mark}"

    human.append("Compatible comultiplications per multiplication:")
    for m, got in table.bialgebra.items():
        human.append(row(f"bialgebra {m}", got, published["bialgebra"].get(m)))
    for m, got in table.infinitesimal.items():
        human.append(row(f"infinitesimal {m}", got, published["infinitesimal"].get(m)))
    human.append("2-associative bialgebras:")
    human.append(row("trivial", len(table.trivial_2as), published["trivial_2as"]))
    human.append(row("non-trivial", len(table.nontrivial_2as), published["nontrivial_2as"]))
    for c in table.nontrivial_2as:
        human.append(f"    {c.label()}")
    human.append("2-bialgebras by type:")
    for key, got in table.type_counts.items():
        human.append(row(f"type ({key})", got, published["types"].get(key)))
    human.append("2-2-bialgebras:")
    human.append(row("all", len(table.twotwob), published["twotwob"]))
    for c in table.twotwob:
        human.append(f"    {c.label()}")
    if table.lambda_sweep:
        human.append("Parameter sweep:")
        for label, verdicts in table.lambda_sweep.items():
            human.append(f"  {label}: " + ", ".join(f"{k} {'yes' if v else 'no'}" for k, v in verdicts.items()))
    if table.deviations:
        human.append("Documented deviations:")
        human += [f"  - {message}" for message in table.deviations]
    _emit(args, human, data)
    return EXIT_OK


# catalog


def _parse_bindings(raw: Sequence[str]) -> Dict[str, str]:
    bindings = {}
    for item in raw:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise CommandError(f"Bindings look like name=value, got {item!r}")
        bindings[name.strip()] = value.strip()
    return bindings


def cmd_catalog(args: argparse.Namespace) -> int:
    fld = _field_override(args) or Field.parse(get_settings().arithmetic.default_field)
    if args.action == "list":
        listed = entries(dim=args.dim, fld=fld)
        human = [f"{e.id:<16} {e.kind:<7} dim {e.dim}  {e.provenance}" for e in listed]
        machine: Dict[str, Any] = {
            "entries": [{"id": e.id, "kind": e.kind, "dim": e.dim, "provenance": e.provenance} for e in listed]
        }
        _emit(args, human, machine)
        return EXIT_OK

    if args.action == "show":
        if not args.id:
            raise CommandError("catalog show needs an entry id")
        entry = get(args.id, _parse_bindings(args.bind) or None, fld)
        sf = StructureFile.from_data(entry.id, entry.data)
        human = [f"# {entry.provenance}", dumps(sf).rstrip("\n")]
        _emit(args, human, {"provenance": entry.provenance, "structure": sf.to_dict()})
        return EXIT_OK

    if args.action == "verify":
        try:
            results = verify_catalog(fld)
        except CatalogError as e:
            _emit(args, [e.message], {"passed": False, "message": e.message})
            return EXIT_FAILED
        human = [f"{entry_id:<16} {report.summary()}" for entry_id, report in results]
        human.append(f"{len(results)} entries verified over {fld}")
        _emit(args, human, {"passed": True, "entries": {i: r.to_dict() for i, r in results}})
        return EXIT_OK

    directory = Path(args.output or get_settings().output.default_output_dir or "structures")
    written = export_all(directory, fld)
    _emit(args, [f"wrote {path}" for path in written], {"written": [str(p) for p in written]})
    return EXIT_OK


# isom


def cmd_isom(args: argparse.Namespace) -> int:
    fld = Field.prime(args.prime)
    name1, b1 = _load_bundle(args.first, fld)
    name2, b2 = _load_bundle(args.second, fld)
    f = isom_search_fp(b1, b2, args.prime, args.budget)
    if f is None:
        _emit(args, [f"{name1} and {name2} are not isomorphic over {fld}"], {"isomorphic": False, "field": fld.tag})
        return EXIT_FAILED
    matrix = [[format_scalar(v) for v in row] for row in f.m]
    human = [f"{name1} -> {name2} over {fld}:"] + ["  [" + ", ".join(row) + "]" for row in matrix]
    _emit(args, human, {"isomorphic": True, "field": fld.tag, "matrix": matrix})
    return EXIT_OK


# discover


def cmd_discover(args: argparse.Namespace) -> int:
    fld = Field.prime(args.prime)
    name, bundle = _load_bundle(args.file, fld)
    if not bundle.mults:
        raise CommandError(f"{args.file}: discovery needs a multiplication")
    m = bundle.mults[0]
    if args.mode == "bialgebra":
        if args.theta is not None:
            raise CommandError("--theta only applies to infinitesimal discovery")
        theta = None
        kind = BundleKind.BIALGEBRA
    else:
        theta = fld(args.theta if args.theta is not None else get_settings().checks.default_theta)
        kind = BundleKind.INFINITESIMAL

    found = discover_fp(m, args.prime, theta, args.budget)
    files = [
        StructureFile(f"{name}_{args.mode}_{index}", Bundle(kind, (m,), (c,), theta))
        for index, c in enumerate(found, start=1)
    ]
    human = [f"{len(found)} comultiplications compatible with {name} over {fld} ({args.mode})"]
    for sf in files:
        c = sf.bundle.comults[0]
        human.append(f"  {sf.name}: {_comult_text(c.d)}")
    if args.output:
        directory = Path(args.output)
        policy = get_settings().output.overwrite_policy
        for sf in files:
            path = save(sf, directory / f"{sf.name}.json", policy)
            if path is not None:
                human.append(f"  written to {path}")
    _emit(args, human, {"field": fld.tag, "mode": args.mode, "found": [sf.to_dict() for sf in files]})
    return EXIT_OK if found else EXIT_FAILED


def _comult_text(d: Sequence[Sequence[Sequence[Any]]]) -> str:
    n = len(d)
    parts = []
    for i in range(n):
        terms = [
            f"{format_scalar(d[i][j][k])}·e{j + 1}⊗e{k + 1}"
            for j in range(n)
            for k in range(n)
            if d[i][j][k]
        ]
        parts.append(f"e{i + 1} ↦ " + (" + ".join(terms) if terms else "0"))
    return "; ".join(parts)


# export-system


def cmd_export_system(args: argparse.Namespace) -> int:
    text = export_system(args.dim, args.kind)
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote polynomial system to {path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="ground field: Q, F2, F3, ... (reduces Q input modulo p)")
    common.add_argument("--theta", help="θ for infinitesimal checks and discovery (default from settings)")
    common.add_argument("--budget", type=int, help="maximum number of search candidates")
    common.add_argument("--output", "-o", help="output file or directory")
    common.add_argument("--machine-readable", action="store_true", help="print JSON instead of text")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    parser = argparse.ArgumentParser(
        prog="bialg",
        description="Exact verification and classification of small bialgebra-type structures",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check the axioms of a structure file")
    p.add_argument("file", help="structure file, or a directory of them")
    p.add_argument("--recursive", action="store_true", help="also check subdirectories")
    p.add_argument("--kind", choices=sorted(_KIND_ALIASES), help="check as this kind instead of the file's")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", parents=[common], help="run a Kaplansky-type construction")
    p.add_argument("kind", choices=["k1", "k2", "2as", "2b", "22b"])
    p.add_argument("inputs", nargs="+", help="unital algebra structure file(s)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("census", parents=[common], help="recount the classification tables")
    p.add_argument("dim", type=int, choices=[2, 3])
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("catalog", parents=[common], help="list, show, verify or export catalog entries")
    p.add_argument("action", choices=["list", "show", "verify", "export"])
    p.add_argument("id", nargs="?")
    p.add_argument("--dim", type=int)
    p.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE", help="parameter binding for show")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("isom", parents=[common], help="search an isomorphism over F_p")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--prime", "-p", type=int, default=2)
    p.set_defaults(func=cmd_isom)

    p = sub.add_parser("discover", parents=[common], help="find every compatible comultiplication over F_p")
    p.add_argument("file")
    p.add_argument("--prime", "-p", type=int, default=2)
    p.add_argument("--mode", choices=["bialgebra", "infinitesimal"], default="bialgebra")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("export-system", parents=[common], help="emit the polynomial system of a kind")
    p.add_argument("dim", type=int)
    p.add_argument("kind", choices=["2as", "2b", "22b"])
    p.set_defaults(func=cmd_export_system)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    manager = get_settings_manager()
    settings = manager.load_settings()
    level = {0: None, 1: "INFO"}.get(args.verbose, "DEBUG")
    manager.setup_logging(level or settings.logging_level)

    try:
        code: int = args.func(args)
        return code
    except PostconditionError as e:
        logger.error(f"Internal error: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_POSTCONDITION
    except (
        CommandError,
        StructureFileError,
        StructureError,
        FieldError,
        ConstructionError,
        CatalogError,
        BudgetExceededError,
        SearchError,
        ValidationError,
    ) as e:
        print(f"error: {e.message}", file=sys.stderr)
        return getattr(e, "exit_code", EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
