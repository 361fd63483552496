"""Command-line verification driver.

Runs named check suites over the algebra, the conjugation identities, the
invariant families, and the orbit pictures, then emits a text or JSON
report.  Exit status is 0 exactly when every executed check passed, 1 when
some check failed, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from . import __version__
from .clifford import h_closure_check, h_det_check
from .constructions import (FamilySpec, verify_independence,
                            verify_invariance, verify_lemma_d,
                            verify_support_filtration)
from .orbits import complex_orbit_check, enumerate_strata
from .records import FAIL, PASS, SKIPPED, CheckRecord
from .scalars import GaussianRational

__all__ = ["RunConfig", "Report", "run_suite", "emit_report", "main"]

SUITES = ("algebra", "lemma-d", "invariance", "independence", "support",
          "orbits", "complex-orbits", "all")

REPORT_SCHEMA_VERSION = 1

FORMAT_ENV_VAR = "INVDIST_FORMAT"


@dataclass(frozen=True)
class RunConfig:
    """Configuration for one verification run."""

    suite: str
    n: int = 3
    lmax: int = 4
    lam: Optional[Fraction] = None  # None = formal parameter
    seed: int = 0
    samples: int = 100
    fmt: str = "text"
    out: Optional[str] = None

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.n < 2:
            raise ValueError("--n must be at least 2")
        if self.lmax < 0:
            raise ValueError("--lmax must be nonnegative")
        if self.samples < 0:
            raise ValueError("--samples must be nonnegative")
        if self.fmt not in ("text", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "n": self.n,
            "lmax": self.lmax,
            "lambda": "formal" if self.lam is None else str(self.lam),
            "seed": self.seed,
            "samples": self.samples,
        }


@dataclass
class Report:
    config: RunConfig
    checks: List[CheckRecord]
    timings: List[float]  # seconds, parallel to checks

    def summary(self) -> dict:
        return {
            "pass": sum(1 for c in self.checks if c.status == PASS),
            "fail": sum(1 for c in self.checks if c.status == FAIL),
            "skipped": sum(1 for c in self.checks if c.status == SKIPPED),
        }

    def to_dict(self) -> dict:
        return {
            "version": REPORT_SCHEMA_VERSION,
            "config": self.config.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary(),
        }

    @property
    def all_passed(self) -> bool:
        return self.summary()["fail"] == 0


# ---------------------------------------------------------------------------
# Suite plans
# ---------------------------------------------------------------------------

Planned = Tuple[str, Callable[[], CheckRecord]]


def _zeta_labels(count: int) -> List[GaussianRational]:
    """Deterministic distinct rational labels 0, 1, 1/2, 1/3, 2/3, ..."""
    labels = [GaussianRational()]
    q = 1
    while len(labels) < count:
        q += 1
        for p in range(1, q):
            if Fraction(p, q).denominator == q:  # p/q in lowest terms
                labels.append(GaussianRational.of(Fraction(p, q)))
                if len(labels) == count:
                    break
    return labels


def _plan(config: RunConfig) -> List[Planned]:
    n, lmax, lam = config.n, config.lmax, config.lam
    seed, samples = config.seed, config.samples
    plan: List[Planned] = []
    want = lambda s: config.suite in (s, "all")

    if want("algebra"):
        plan.append((f"algebra.det.n{n}", lambda: h_det_check(n)))
        plan.append((f"algebra.closure.n{n}",
                     lambda: h_closure_check(n, samples=min(samples, 25),
                                             seed=seed)))
    if want("lemma-d"):
        if n >= 3:
            plan.append((f"lemma-d.D.n{n}", lambda: verify_lemma_d(n, "D")))
        else:
            plan.append(("lemma-d.Dprime.n2",
                         lambda: verify_lemma_d(2, "Dprime")))
    if want("invariance"):
        fam = "T" if n >= 3 else "T2"
        fam_lam = lam if n >= 3 else Fraction(2)
        for l in range(min(lmax, 3) + 1):
            spec = FamilySpec(n, fam, l, lam=fam_lam)
            plan.append((f"invariance.{fam}.n{n}.l{l}",
                         lambda s=spec: verify_invariance(
                             s, composite_samples=min(samples, 5),
                             seed=seed)))
    if want("independence"):
        fam = "T" if n >= 3 else "T2"
        fam_lam = lam if n >= 3 else Fraction(2)
        spec = FamilySpec(n, fam, 0, lam=fam_lam)
        plan.append((f"independence.{fam}.n{n}.lmax{lmax}",
                     lambda: verify_independence(spec, lmax)))
    if want("support"):
        if n >= 3:
            for j in range(2, n):
                plan.append((f"support.n{n}.j{j}.lmax{lmax}",
                             lambda jj=j: verify_support_filtration(
                                 n, jj, lmax)))
        else:
            plan.append(("support.n2",
                         lambda: CheckRecord(
                             check_id="support.n2",
                             statement="support filtration needs n >= 3",
                             paper_ref="Proposition 4.8",
                             status=SKIPPED,
                             details={"reason": "not applicable at n = 2"})))
    if want("orbits"):
        plan.append((f"orbits.census.n{n}",
                     lambda: enumerate_strata(n, samples=samples, seed=seed)))
    if want("complex-orbits"):
        labels = _zeta_labels(100)
        plan.append((f"complex-orbits.n{n}",
                     lambda: complex_orbit_check(
                         n, labels, samples=min(samples, 10), seed=seed)))
    return plan


def run_suite(config: RunConfig) -> Report:
    """Execute the selected suite.  After the first failing check the
    remaining planned checks are recorded as skipped, not executed."""
    config.validate()
    checks: List[CheckRecord] = []
    timings: List[float] = []
    failed = False
    for check_id, thunk in _plan(config):
        if failed:
            checks.append(CheckRecord(
                check_id=check_id,
                statement="not executed after earlier failure",
                paper_ref="n/a",
                status=SKIPPED,
                details={}))
            timings.append(0.0)
            continue
        start = time.monotonic()
        record = thunk()
        timings.append(time.monotonic() - start)
        checks.append(record)
        if record.status == FAIL:
            failed = True
    order = sorted(range(len(checks)), key=lambda i: checks[i].check_id)
    return Report(config,
                  [checks[i] for i in order],
                  [timings[i] for i in order])


def emit_report(report: Report, fmt: str) -> str:
    """Serialize.  JSON output is byte-stable for a fixed config and seed;
    wall times therefore appear only in the text format."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    lines = [f"verification report (schema v{REPORT_SCHEMA_VERSION}, "
             f"tool {__version__})"]
    cfg = report.config.to_dict()
    lines.append("config: " + ", ".join(f"{k}={v}" for k, v in cfg.items()))
    for check, dt in zip(report.checks, report.timings):
        lines.append(f"[{check.status.upper():7s}] {check.check_id:40s} "
                     f"({check.paper_ref}) {check.statement} [{dt:.3f}s]")
    s = report.summary()
    lines.append(f"summary: {s['pass']} passed, {s['fail']} failed, "
                 f"{s['skipped']} skipped")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _parse_lambda(text: str) -> Optional[Fraction]:
    if text == "formal":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"expected 'formal' or a rational p/q, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invdist",
        description="verify the invariant-distribution computations")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES)
    verify.add_argument("--n", type=int, default=3,
                        help="complex dimension (default 3)")
    verify.add_argument("--lmax", type=int, default=4,
                        help="maximal family order (default 4)")
    verify.add_argument("--lambda", dest="lam", type=_parse_lambda,
                        default=None, metavar="p/q|formal",
                        help="spectral parameter (default formal)")
    verify.add_argument("--seed", type=int, default=0,
                        help="random seed (default 0)")
    verify.add_argument("--samples", type=int, default=100,
                        help="random sample count (default 100)")
    verify.add_argument("--format", dest="fmt", choices=("text", "json"),
                        default=None,
                        help=f"output format (default text, or "
                             f"${FORMAT_ENV_VAR})")
    verify.add_argument("--out", default=None, metavar="path",
                        help="write the report to a file instead of stdout")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = args.fmt or os.environ.get(FORMAT_ENV_VAR, "text")
    config = RunConfig(suite=args.suite, n=args.n, lmax=args.lmax,
                       lam=args.lam, seed=args.seed, samples=args.samples,
                       fmt=fmt, out=args.out)
    try:
        config.validate()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_suite(config)
    text = emit_report(report, config.fmt)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
