"""Configuration loading, suite execution and JSON reporting.

Exit codes: 0 all cases passed, 1 at least one case failed, 2 the
configuration itself was rejected.  Reports are deterministic for a fixed
config and seed up to the per-case timing fields.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .analytic import Configuration
from .scalars import FieldDescriptor, FieldError
from .suites import SUITE_NAMES, run_suites

__all__ = ["ConfigError", "RunConfig", "run", "main"]

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    field: dict = None
    centers: list = None
    precision: int = 16
    scenario: dict = None
    seed: int = 42
    suites: list = None
    output: str = None
    tamper_b: bool = False
    verbose: bool = False

    def __post_init__(self):
        if self.field is None:
            self.field = {"kind": "rationals"}
        if self.centers is None:
            self.centers = ["0", "1", "2"]
        if self.scenario is None:
            self.scenario = {}
        self.scenario = {
            "i": self.scenario.get("i", 2),
            "j": self.scenario.get("j", 1),
            "k": self.scenario.get("k", 3),
            "q": self.scenario.get("q", 2),
            "qprime": self.scenario.get("qprime", 2),
        }
        if not self.suites:
            self.suites = ["all"]

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        known = {"field", "centers", "precision", "scenario", "seed", "suites",
                 "output", "tamper_b", "verbose"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return RunConfig(**d)

    def resolve(self) -> tuple:
        """Validate and build the Configuration; ConfigError on any problem."""
        try:
            fd = FieldDescriptor(self.field.get("kind", "rationals"), self.field.get("m", 0))
        except (FieldError, AttributeError) as exc:
            raise ConfigError(f"bad field descriptor: {exc}") from exc
        if not isinstance(self.precision, int) or self.precision < 4:
            raise ConfigError("precision must be an integer >= 4")
        if len(self.centers) < 2:
            raise ConfigError("need at least two centers")
        if len(set(self.centers)) != len(self.centers):
            raise ConfigError("centers must be distinct")
        try:
            cfg = Configuration(fd, [str(c) for c in self.centers], self.precision)
        except (ValueError, FieldError) as exc:
            raise ConfigError(str(exc)) from exc
        names = list(self.suites)
        if "all" in names:
            names = list(SUITE_NAMES)
        for n in names:
            if n not in SUITE_NAMES:
                raise ConfigError(f"unknown suite {n!r} (have {', '.join(SUITE_NAMES)})")
        sc = self.scenario
        for key in ("i", "j"):
            if sc[key] not in cfg.indices:
                raise ConfigError(f"scenario index {key}={sc[key]} outside the center list")
        if sc["i"] == sc["j"]:
            raise ConfigError("scenario indices i and j must differ")
        if sc["k"] < 2:
            raise ConfigError("scenario exponent k must be >= 2")
        return cfg, names

    def echo(self) -> dict:
        return {
            "field": self.field,
            "centers": [str(c) for c in self.centers],
            "precision": self.precision,
            "scenario": self.scenario,
            "seed": self.seed,
            "suites": self.suites,
            "tamper_b": self.tamper_b,
        }


def run(rc: RunConfig) -> tuple:
    """Execute the requested suites; returns (report dict, exit code)."""
    cfg, names = rc.resolve()
    results = run_suites(cfg, rc.scenario, rc.seed, names,
                         tamper_b=rc.tamper_b, verbose=rc.verbose)
    results.sort(key=lambda r: (r.suite, r.case_id))
    summary = {"pass": 0, "fail": 0, "skip": 0}
    for r in results:
        summary[r.status] += 1
    report = {
        "schema_version": SCHEMA_VERSION,
        "artifact": {"name": "patchalg", "version": __version__},
        "config": rc.echo(),
        "records": [r.to_dict() for r in results],
        "summary": summary,
    }
    code = 0 if summary["fail"] == 0 else 1
    return report, code


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="patchalg",
        description="run the exact-arithmetic verification suites and emit a JSON report",
    )
    ap.add_argument("--config", help="JSON config file (keys mirror the run configuration)")
    ap.add_argument("--suite", action="append", default=None,
                    help=f"suite to run, repeatable; one of {', '.join(SUITE_NAMES)} or all")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--precision", type=int, default=None)
    ap.add_argument("--output", default=None, help="report path (stdout when omitted)")
    ap.add_argument("--tamper-b", action="store_true",
                    help="debug: replace b by b^2 in the certificate suite")
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)

    try:
        data = {}
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        rc = RunConfig.from_dict(data)
        if args.suite:
            rc.suites = args.suite
        if args.seed is not None:
            rc.seed = args.seed
        if args.precision is not None:
            rc.precision = args.precision
        if args.output is not None:
            rc.output = args.output
        if args.tamper_b:
            rc.tamper_b = True
        if args.verbose:
            rc.verbose = True
        report, code = run(rc)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    text = json.dumps(report, indent=2, sort_keys=True)
    if rc.output:
        with open(rc.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"report written to {rc.output} "
              f"({report['summary']['pass']} pass, {report['summary']['fail']} fail)",
              file=sys.stderr)
    else:
        print(text)
    return 0 if report["summary"]["fail"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
