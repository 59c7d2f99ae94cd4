"""Command-line interface: construct groups, run verification suites, and export JSON

   Copyright 2023 The polyfus Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.

Usage examples:
    polyfus construct -p 3 -m 2 Sn:2
    polyfus verify somnibus -p 3 -m 2 -n 2 --json
    polyfus verify out0 -p 3 -m 2 -n 2 --system "F*(n,q,R)"
    polyfus verify all -p 3 -m 2 --jobs 4 --seed 7 --json
    polyfus export Sn:1 -p 3 -m 1 --what table -o table.json
    polyfus describe "F*_Lambda(q)" -p 3 -m 2

JSON goes to stdout and logs go to stderr.  Exit codes: 0 if every check is verified or skipped, 1
if any check failed, and 2 for invalid arguments.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import sys
from collections.abc import Callable, Sequence

import numpy as np

from polyfus import cache, fusion, suites
from polyfus.groups import PolynomialGroup, Subgroup, check_size, get_size_cap, standard_subgroups
from polyfus.structure import SeriesKind, central_series

logger = logging.getLogger(__name__)

EXPORT_TABLE_CAP = 10**5


def _dumps(data: object) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False)


################################################################################
# construct


def construct_report(group: PolynomialGroup) -> dict[str, object]:
    """Structural data of a group: its order, central series, and some standard subgroups."""
    upper = central_series(group, kind=SeriesKind.UPPER_CENTRAL).orders
    lower = central_series(group, kind=SeriesKind.LOWER_CENTRAL).orders
    derived_dim = group.lower_central_terms()[0].shape[0]
    subgroups = standard_subgroups(group)
    exponent = None
    if group.order <= get_size_cap():
        exponent = int(np.max(group.row_orders(Subgroup.whole(group).elements)))
    return {
        "group": group.to_json(),
        "name": group.name,
        "order": group.order,
        "upperCentral": upper,
        "lowerCentral": lower,
        "centre": upper[0],
        "V/[V,S]": group.q ** (group.dim - derived_dim),
        "exponent": exponent,
        "R": subgroups["R"].order,
        "Q": subgroups["Q"].order if "Q" in subgroups else None,
    }


def cmd_construct(args: argparse.Namespace) -> int:
    """Print a structural report of a group."""
    group = PolynomialGroup.from_target(args.p, args.m, args.target)
    report = construct_report(group)
    if args.json:
        print(_dumps(report))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")
    return 0


################################################################################
# verify


def suite_reports(
    suite_id: str,
    p: int,
    m: int,
    target: str | None,
    system: str | None,
    seed: int,
    tier: suites.Tier | None,
    size_cap: int,
) -> list[dict[str, object]]:
    """Serialized reports of one suite.  The size cap is an argument so that it keys the cache."""
    params = suites.SuiteParams(p, m, target, system)
    return [report.to_json() for report in suites.run_suite(suite_id, params, seed=seed, tier=tier)]


def _report_key(report: dict[str, object]) -> tuple[str, str]:
    return str(report["check"]), _dumps(report["params"])


def verify_reports(args: argparse.Namespace) -> list[dict[str, object]]:
    """Run the requested suites, possibly in parallel, and sort their reports."""
    suite_ids = list(suites.SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in suites.SUITES:
        raise ValueError(f"Unrecognized suite: {args.suite} (expected 'all' or one of {suite_ids})")
    target = "SLambda" if args.Lambda else (None if args.n is None else f"Sn:{args.n}")
    # fail early on invalid fields and targets
    suites.SuiteParams(args.p, args.m, target, args.system).groups()

    runner: Callable[..., list[dict[str, object]]] = suite_reports
    if args.cache:
        runner = cache.use_disk_cache(cache_dir=args.cache_dir)(suite_reports)
    run_args = (args.p, args.m, target, args.system, args.seed, args.tier, get_size_cap())
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(args.jobs, 1)) as executor:
        futures = [executor.submit(runner, suite_id, *run_args) for suite_id in suite_ids]
        reports = [report for future in futures for report in future.result()]
    return sorted(reports, key=_report_key)


def cmd_verify(args: argparse.Namespace) -> int:
    """Print the reports of verification suites, and exit with 1 if any check failed."""
    reports = verify_reports(args)
    for report in reports:
        if args.json:
            print(_dumps(report))
        else:
            params = report["params"]
            assert isinstance(params, dict)
            summary = ", ".join(f"{key}={val}" for key, val in sorted(params.items()))
            print(f"{report['status']:15} {report['check']} ({summary})")
    failed = [report for report in reports if report["status"] == "failed"]
    logger.info(f"{len(reports)} reports, {len(failed)} failed")
    return 1 if failed else 0


################################################################################
# export


def multiplication_table(group: PolynomialGroup) -> dict[str, object]:
    """The elements of S sorted by key, and its multiplication table as indices into that list."""
    check_size(group.order, f"the multiplication table of {group}")
    if group.order > EXPORT_TABLE_CAP:
        raise ValueError(
            f"Multiplication tables require |S| <= {EXPORT_TABLE_CAP} (provided: {group.order})"
        )
    whole = Subgroup.whole(group)
    keys, elements = whole.keys, whole.elements
    table = []
    closed = True
    for row in elements:
        products = group.keys(group.multiply(row.reshape(1, -1), elements))
        indices = np.searchsorted(keys, products)
        closed &= bool(np.all(keys[np.minimum(indices, len(keys) - 1)] == products))
        table.append(indices.tolist())
    return {
        "group": group.to_json(),
        "elements": [group.row_to_json(row) for row in elements],
        "table": table,
        "closed": closed,
    }


def series_export(group: PolynomialGroup) -> dict[str, object]:
    """Upper and lower central series, with generators of every term."""
    return {
        "group": group.to_json(),
        "upperCentral": central_series(group, kind=SeriesKind.UPPER_CENTRAL).to_json(),
        "lowerCentral": central_series(group, kind=SeriesKind.LOWER_CENTRAL).to_json(),
    }


def cmd_export(args: argparse.Namespace) -> int:
    """Write the central series or the multiplication table of a group as JSON."""
    group = PolynomialGroup.from_target(args.p, args.m, args.target)
    data = series_export(group) if args.what == "series" else multiplication_table(group)
    text = _dumps(data) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as file:
            file.write(text)
        logger.info(f"Wrote {args.what} of {group} to {args.output}")
    return 0


################################################################################
# describe


def cmd_describe(args: argparse.Namespace) -> int:
    """Print the descriptor of a fusion system as JSON."""
    desc = fusion.describe_system(args.system, args.p, args.m, args.n)
    print(_dumps(desc.to_json()))
    return 0


################################################################################
# entry point


def _add_field_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-p", type=int, required=True, help="odd prime p")
    parser.add_argument("-m", type=int, default=1, help="degree m of the field GF(p^m)")


def build_parser() -> argparse.ArgumentParser:
    """The argument parser of the polyfus command."""
    parser = argparse.ArgumentParser(
        prog="polyfus", description="Polynomial p-groups and their fusion systems."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="structural report of a group")
    construct.add_argument("target", help="'Sn:<n>' or 'SLambda'")
    _add_field_args(construct)
    construct.add_argument("--json", action="store_true", help="print JSON")
    construct.set_defaults(func=cmd_construct)

    verify = commands.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", help=f"'all' or one of: {', '.join(suites.SUITES)}")
    _add_field_args(verify)
    targets = verify.add_mutually_exclusive_group()
    targets.add_argument("-n", type=int, help="run on S_n(q)")
    targets.add_argument("--lambda", dest="Lambda", action="store_true", help="run on S_Lambda(q)")
    verify.add_argument("--system", help="fusion system for the out0 suite")
    verify.add_argument("--json", action="store_true", help="print JSON lines")
    verify.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    verify.add_argument("--jobs", type=int, default=1, help="number of suites to run in parallel")
    verify.add_argument("--tier", choices=suites.TIERS, help="force a tier")
    verify.add_argument("--cache", action="store_true", help="cache reports on disk")
    verify.add_argument("--cache-dir", help="cache directory")
    verify.set_defaults(func=cmd_verify)

    export = commands.add_parser("export", help="export the series or table of a group")
    export.add_argument("target", help="'Sn:<n>' or 'SLambda'")
    _add_field_args(export)
    export.add_argument("--what", choices=("series", "table"), default="series")
    export.add_argument("-o", "--output", help="output file (default: stdout)")
    export.set_defaults(func=cmd_export)

    describe = commands.add_parser("describe", help="describe a fusion system")
    describe.add_argument("system", help=f"one of: {', '.join(fusion.SYSTEMS)}")
    _add_field_args(describe)
    describe.add_argument("-n", type=int, help="n for systems on S_n(q)")
    describe.set_defaults(func=cmd_describe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the polyfus command line."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
