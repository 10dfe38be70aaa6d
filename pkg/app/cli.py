"""
Command-line front door

    python -m app.cli trace --poly "x^31+x+1"
    python -m app.cli search-f --n 3..16 --par 4
    python -m app.cli search-g --n 10 --census
    python -m app.cli families --check c4 --range 31..34
    python -m app.cli matthews --config data/matthews_ex1.cfg --max-degree 100 --steps 10000 --all-seeds-upto 4
    python -m app.cli count --degree 6 --stratum odd

Results go to stdout, logs to stderr. Exit code 0 on success, 1 on a domain
error, 2 on a usage error.
"""
import argparse
import logging
import sys
from typing import List, Optional, Tuple

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from app.config import LOG_LEVELS, settings
from app.exceptions import Gf2CollatzError
from app.models.enumeration_models import QUADRANTS, Constraint, Stratum
from app.services import report_writers
from app.services.collatz_service import collatz_service
from app.services.enumeration_service import enumeration_service
from app.services.family_service import family_service
from app.services.gf2poly import parse_poly
from app.services.matthews_service import matthews_service
from app.services.search_service import search_service

logger = logging.getLogger(__name__)


def _range(text: str) -> Tuple[int, int]:
    """'7' or '3..16' as an inclusive (lo, hi) pair"""
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range a..b, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _values(span: Tuple[int, int]) -> List[int]:
    return list(range(span[0], span[1] + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gf2collatz", description="Collatz-type map on binary polynomials")
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None, help="override GF2C_LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    trace = commands.add_parser("trace", help="trajectory of one seed")
    trace.add_argument("--poly", required=True, help="polynomial text (x^3+x+1) or hex mask (0xb)")
    trace.add_argument("--json", action="store_true", help="emit JSON instead of the text record")

    search_f = commands.add_parser("search-f", help="longest trajectory over degree-n seeds")
    search_g = commands.add_parser("search-g", help="longest within-degree chain of odd polynomials")
    for sub in (search_f, search_g):
        sub.add_argument("--n", required=True, type=_range, help="degree or range a..b")
        sub.add_argument("--par", type=int, default=None, help="worker processes")
        sub.add_argument("--checkpoint", default=None, help="checkpoint file (single n only)")
        sub.add_argument("--resume", action="store_true", help="continue from --checkpoint")
        sub.add_argument("--timing", action="store_true", help="fill the wall_ms column")
        sub.add_argument("--format", choices=["csv", "json"], default="csv")
    search_g.add_argument("--census", action="store_true", help="emit the chain census as JSON")

    families = commands.add_parser("families", help="conjecture checks and published tables")
    families.add_argument("--check", required=True, choices=["c2", "c3", "c4", "tables"])
    families.add_argument("--range", type=_range, default=None, help="r range for c2, n range for c3/c4")
    families.add_argument("--format", choices=["csv", "text"], default="csv")

    matthews = commands.add_parser("matthews", help="classify trajectories of a generalized map")
    matthews.add_argument("--config", required=True, help="K=, D=, R[r]= config file")
    matthews.add_argument("--max-degree", required=True, type=int, help="divergence threshold")
    matthews.add_argument("--steps", required=True, type=int, help="step cap per seed")
    matthews.add_argument("--all-seeds-upto", type=int, default=None, help="census over seeds of degree <= d")
    matthews.add_argument("--seed", default="1", help="single seed when no census is requested")

    count = commands.add_parser("count", help="enumerate a stratum and check the counting lemma")
    count.add_argument("--degree", required=True, type=int)
    count.add_argument("--stratum", choices=["odd", "quadrants", "all"], default="odd")

    polybound = commands.add_parser("polybound", help="r_A against n(n+1)/2")
    polybound.add_argument("--n-max", type=int, default=16)
    polybound.add_argument("--sample", type=int, default=1000, help="random seeds per sampled degree")
    polybound.add_argument("--format", choices=["csv", "text"], default="csv")

    chain_check = commands.add_parser("chain-check", help="trajectory lengths of chains of a given length")
    chain_check.add_argument("--n", required=True, type=int)
    chain_check.add_argument("--chain-len", required=True, type=int)
    chain_check.add_argument("--target", required=True, type=int)
    chain_check.add_argument("--limit", type=int, default=16)

    conjugation = commands.add_parser("conjugation", help="degree sequences of A, A(x+1) and the reciprocal")
    conjugation.add_argument("--poly", required=True)
    return parser


def _configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(name)s - %(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
    )


def _run_trace(args) -> str:
    trace = collatz_service.trace(parse_poly(args.poly))
    return collatz_service.to_json(trace) if args.json else collatz_service.to_text_record(trace)


def _run_search(args, parser: argparse.ArgumentParser) -> str:
    values = _values(args.n)
    if args.checkpoint and len(values) > 1:
        parser.error("--checkpoint needs a single --n")
    if args.resume and not args.checkpoint:
        parser.error("--resume needs --checkpoint")
    records, censuses = [], []
    for n in values:
        options = dict(parallelism=args.par, checkpoint=args.checkpoint, resume=args.resume)
        if args.command == "search-f":
            records.append(search_service.compute_f(n, **options))
        else:
            record, census = search_service.compute_g(n, **options)
            records.append(record)
            censuses.append(census)
    if getattr(args, "census", False):
        return "".join(report_writers.census_json(census) for census in censuses)
    if args.format == "json":
        return report_writers.search_json(records, timing=args.timing)
    return report_writers.search_csv(records, timing=args.timing)


def _run_families(args) -> str:
    if args.check == "tables":
        checks = family_service.table_checks()
        return report_writers.table_check_text(checks) if args.format == "text" else report_writers.table_check_csv(checks)
    defaults = {"c2": (1, 5), "c3": (31, 34), "c4": (31, 34)}
    values = _values(args.range or defaults[args.check])
    checker = {
        "c2": family_service.check_conjecture_2,
        "c3": family_service.check_conjecture_3,
        "c4": family_service.check_conjecture_4,
    }[args.check]
    report = checker(values)
    return report_writers.verdict_text(report) if args.format == "text" else report_writers.verdict_csv(report)


def _run_matthews(args) -> str:
    cfg = matthews_service.load_config(args.config)
    if args.all_seeds_upto is not None:
        outcomes = matthews_service.census(cfg, args.all_seeds_upto, args.max_degree, args.steps)
        return report_writers.matthews_census_csv(outcomes)
    outcome = matthews_service.classify(cfg, parse_poly(args.seed), args.max_degree, args.steps)
    return report_writers.matthews_json(outcome)


def _run_count(args) -> str:
    if args.stratum == "odd":
        return f"{enumeration_service.count(Stratum(degree=args.degree, constraint=Constraint.ODD))}\n"
    if args.stratum == "all":
        return f"{enumeration_service.count(Stratum(degree=args.degree, constraint=Constraint.ALL))}\n"
    lines = [
        f"{constraint.value} {enumeration_service.count(Stratum(degree=args.degree, constraint=constraint))}"
        for constraint in QUADRANTS
    ]
    return "\n".join(lines) + "\n"


def _run_polybound(args) -> str:
    report = search_service.polybound_report(args.n_max, sample=args.sample)
    return report_writers.polybound_text(report) if args.format == "text" else report_writers.polybound_csv(report)


def _run_chain_check(args) -> str:
    check = search_service.targeted_chain_check(args.n, args.chain_len, args.target, limit=args.limit)
    return report_writers.targeted_json(check)


def _run_conjugation(args) -> str:
    report = family_service.conjugation_experiment(parse_poly(args.poly))
    return report.model_dump_json() + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else 2
    _configure_logging(args.log_level)

    handlers = {
        "trace": _run_trace,
        "families": _run_families,
        "matthews": _run_matthews,
        "count": _run_count,
        "polybound": _run_polybound,
        "chain-check": _run_chain_check,
        "conjugation": _run_conjugation,
    }
    try:
        if args.command in ("search-f", "search-g"):
            output = _run_search(args, parser)
        else:
            output = handlers[args.command](args)
    except SystemExit as exit_:
        return exit_.code if isinstance(exit_.code, int) else 2
    except Gf2CollatzError as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return 1
    except (OSError, ValidationError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
