"""webtensor <command> <manifest> [--strict-paper] [--format human|records]

Exit codes: 0 all checks pass, 1 some check fails, 2 input error.
Erratum records (a printed formula that disagrees with the solver) do not fail a
run unless --strict-paper is given.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import validate
from .loops import InvalidSplit
from .manifest import ManifestError, load_manifest
from .report import ERRATUM, FAIL, INFO, PASS, Report
from .suites import SUITES, Workbench

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="webtensor", description="Exact structure tensors of coset-section loops.")
    p.add_argument("command", choices=sorted(SUITES))
    p.add_argument("manifest", help="path to a JSON manifest")
    p.add_argument("--strict-paper", action="store_true", help="treat erratum records as failures")
    p.add_argument("--format", choices=("human", "records"), default="human")
    return p


def run(command: str, manifest, strict: bool = False) -> tuple[Report, int]:
    """Run one suite on a parsed manifest. Raises ManifestError for unusable input."""
    inst = manifest.instance()
    if command != "validate":
        checks = validate(inst.algebra, inst.split)
        if not checks.ok:
            bad = next(c for c in checks.checks if not c.passed)
            raise ManifestError(f"manifest does not define a Lie algebra with subalgebra h: {bad.name} fails"
                                + (f" ({bad.detail})" if bad.detail else ""))
    try:
        records = SUITES[command](Workbench(inst))
    except InvalidSplit as exc:
        raise ManifestError(str(exc)) from None
    report = Report(list(records))
    return report, EXIT_OK if report.ok(strict) else EXIT_FAIL


def summary(report: Report, strict: bool, code: int) -> str:
    counts = {s: sum(r.status == s for r in report.records) for s in (PASS, FAIL, ERRATUM, INFO)}
    mode = " (strict)" if strict else ""
    return (f"summary: {counts[PASS]} pass, {counts[FAIL]} fail, {counts[ERRATUM]} erratum, "
            f"{counts[INFO]} info; exit {code}{mode}\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        manifest = load_manifest(args.manifest)
        report, code = run(args.command, manifest, args.strict_paper)
    except ManifestError as exc:
        if args.format == "records":
            out.write(json.dumps({"check": "input", "status": "error", "detail": exc.message,
                                  "field": exc.field, "line": exc.line}, sort_keys=True) + "\n")
        print(f"webtensor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "records":
        out.write(report.render("records"))
    else:
        out.write(f"# {args.command}: {manifest.name or args.manifest}\n")
        out.write(report.render("human"))
        out.write(summary(report, args.strict_paper, code))
    return code


if __name__ == "__main__":
    sys.exit(main())
