#!/usr/bin/env python3
"""
Command-line harness: python -m siegel_reduce <command> [options]

Commands:
    check      certify admissibility of the configured subspace
    reduce     project a point onto the zero level set and report quotient coordinates
    quotient   sample the quotient cone, CSV of membership and lift-then-project round trips
    lie-test   test a candidate subalgebra against the Lie condition
    verify     run the randomized invariant suite

Exit codes: 0 success, 1 failed check, 2 inadmissible / not admissible / Lie
condition failed, 3 admissibility undecided, 4 point not in the domain or not
on the zero set, 5 quotient membership undecided, 64 configuration error.
"""

import sys
import json
import logging
import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .cone import ConeSpec
from .errors import (
    ConfigError, NotAdmissible, NotConeCompatible, NotInDomain, NotOnZeroSet, SiegelReduceError,
)
from .liecond import verify_lie_condition
from .moment import GeneratorSet, translation_subgroup
from .reduce import (
    ADMISSIBLE, INADMISSIBLE, MEMBER, NON_MEMBER, UNDECIDED, Subspace, check_admissible,
    quotient_membership, reduce_point, roundtrip_error, split_map,
)
from .tube import TubePoint
from .utils import (
    Tolerances, create_log_file, csv_text, derive_seed, dumps_report, make_rng,
    resolve_seed, sanitize_error_message, setup_logging, validate_tolerances,
)
from .verify import DEFAULT_FAMILY, default_suite, random_interior, summarize

logger = logging.getLogger("siegel_reduce.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_REJECTED = 2
EXIT_UNDECIDED = 3
EXIT_NOT_IN_DOMAIN = 4
EXIT_MEMBERSHIP_UNDECIDED = 5
EXIT_CONFIG = 64

CONFIG_KEYS = ("cone", "subspace", "candidate_subalgebra", "base_point", "tolerances", "seed")


@dataclass(frozen=True)
class Config:
    cone: Optional[ConeSpec] = None
    subspace: Optional[Subspace] = None
    candidate: Optional[GeneratorSet] = None
    base_point: Optional[TubePoint] = None
    tolerances: Optional[Dict[str, Any]] = None
    seed: Optional[Any] = None

    def require(self, *names: str) -> None:
        labels = {"candidate": "candidate_subalgebra"}
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(f"Configuration needs '{labels.get(name, name)}'", key=labels.get(name, name))


def parse_config(data: Any) -> Config:
    """Validate a decoded configuration object; unknown keys are rejected."""
    if not isinstance(data, dict):
        raise ConfigError("Configuration must be a JSON object", key="config")
    for key in data:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"Unknown configuration key '{key}'", key=key)

    cone = ConeSpec.from_dict(data["cone"]) if "cone" in data else None
    if cone is None and any(k in data for k in ("subspace", "candidate_subalgebra", "base_point")):
        raise ConfigError("A cone is required to interpret the other entries", key="cone")
    n = cone.ambient_dim if cone else 0

    subspace = Subspace.from_dict(data["subspace"], n) if "subspace" in data else None
    candidate = GeneratorSet.from_dict(data["candidate_subalgebra"], n) if "candidate_subalgebra" in data else None
    base_point = TubePoint.from_dict(cone, data["base_point"], key="base_point") if "base_point" in data else None

    tolerances = data.get("tolerances")
    if tolerances is not None and not isinstance(tolerances, dict):
        raise ConfigError("'tolerances' must be an object", key="tolerances")
    validate_tolerances(tolerances)
    return Config(cone, subspace, candidate, base_point, tolerances, data.get("seed"))


def load_config(path: Optional[Path]) -> Config:
    if path is None:
        return Config()
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise ConfigError(f"Cannot read configuration: {exc}", key="config") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Configuration is not valid JSON: {exc}", key="config") from exc
    return parse_config(data)


def parse_tol_overrides(items: Sequence[str]) -> Dict[str, float]:
    """Parse repeated NAME=VALUE flags."""
    out: Dict[str, float] = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise ConfigError(f"Expected NAME=VALUE, got '{item}'", key="--tol")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"Tolerance value '{value}' is not a number", key=name.strip()) from exc
    return out


class Runner:
    """Resolved run context shared by the commands."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config(args.config)
        merged = dict(self.config.tolerances or {})
        merged.update(parse_tol_overrides(args.tol))
        self.tol: Tolerances = validate_tolerances(merged)
        self.seed = resolve_seed(args.seed, self.config.seed)

    def provenance(self) -> Dict[str, Any]:
        return {"seed": self.seed, "tolerances": self.tol.to_dict()}

    def emit(self, text: str) -> None:
        if not text.endswith("\n"):
            text += "\n"
        sys.stdout.write(text)
        if self.args.out is not None:
            out = Path(self.args.out)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text, encoding='utf-8', newline='\n')

    def report(self, command: str, body: Dict[str, Any]) -> None:
        payload = {"command": command}
        payload.update(body)
        payload.update(self.provenance())
        self.emit(dumps_report(payload))

    def cmd_check(self) -> int:
        cfg = self.config
        cfg.require("cone", "subspace")
        cert = check_admissible(cfg.cone, cfg.subspace, self.seed, self.tol)
        self.report("check", {"cone": cfg.cone.to_dict(), "subspace": cfg.subspace.to_dict(),
                              "certificate": cert.to_dict()})
        return {ADMISSIBLE: EXIT_OK, INADMISSIBLE: EXIT_REJECTED}.get(cert.verdict, EXIT_UNDECIDED)

    def cmd_reduce(self) -> int:
        cfg = self.config
        cfg.require("cone", "subspace")
        if self.args.point is not None:
            try:
                data = json.loads(self.args.point)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"--point is not valid JSON: {exc}", key="--point") from exc
            point = TubePoint.from_dict(cfg.cone, data, key="--point")
        elif cfg.base_point is not None:
            point = cfg.base_point
        else:
            raise ConfigError("No point given (use --point or base_point)", key="--point")

        try:
            result = reduce_point(cfg.cone, cfg.subspace, point, seed=self.seed, tol=self.tol)
        except NotAdmissible as e:
            self._error(e)
            return EXIT_REJECTED
        except NotInDomain as e:
            self._error(e)
            return EXIT_NOT_IN_DOMAIN
        q_re, q_im = split_map(cfg.cone, cfg.subspace, result.point, check=False).quotient
        self.report("reduce", {"reduction": result.to_dict(),
                               "reduced_coordinates": {"re": q_re, "im": q_im}})
        return EXIT_OK

    def cmd_quotient(self) -> int:
        cfg = self.config
        cfg.require("cone", "subspace")
        cone, subspace = cfg.cone, cfg.subspace
        cert = check_admissible(cone, subspace, self.seed, self.tol)
        if not cert.admissible:
            self._error(NotAdmissible(f"Subspace is {cert.verdict}"))
            return EXIT_REJECTED

        m, k = subspace.n - subspace.k, subspace.k
        header = ([f"t_{i}" for i in range(m)] + ["member"] + [f"h_{j}" for j in range(k)]
                  + ["roundtrip_err", "negation_rejected"])
        rows: List[List[Any]] = []
        undecided = failed = False
        for index in range(max(0, self.args.samples)):
            rng = make_rng(derive_seed(self.seed, index))
            t = subspace.complement.T @ random_interior(cone, rng)
            s_re = rng.standard_normal(m)
            membership = quotient_membership(cone, subspace, t, self.seed, self.tol)
            negated = quotient_membership(cone, subspace, -t, self.seed, self.tol)
            err = None
            if membership.status == MEMBER:
                err = roundtrip_error(cone, subspace, s_re, t, cert, self.seed, self.tol)
                failed |= err > self.tol.roundtrip
            else:
                failed = True
            undecided |= UNDECIDED in (membership.status, negated.status)
            failed |= negated.status != NON_MEMBER
            rows.append(list(t) + [membership.member] + list(membership.witness)
                        + [err, negated.status == NON_MEMBER])
        self.emit(csv_text(header, rows))
        if undecided:
            logger.error("Quotient membership undecided for at least one sample")
            return EXIT_MEMBERSHIP_UNDECIDED
        return EXIT_FAILURE if failed else EXIT_OK

    def cmd_lie_test(self) -> int:
        cfg = self.config
        cfg.require("cone", "subspace", "base_point", "candidate")
        group = translation_subgroup(cfg.subspace)
        try:
            report = verify_lie_condition(cfg.cone, group, cfg.base_point, cfg.candidate,
                                          self.args.samples, self.seed, self.tol)
        except (NotOnZeroSet, NotInDomain) as e:
            self._error(e)
            return EXIT_NOT_IN_DOMAIN
        except NotConeCompatible as e:
            self._error(e)
            return EXIT_CONFIG
        self.report("lie-test", {"report": report.to_dict()})
        return EXIT_OK if report.passed else EXIT_REJECTED

    def cmd_verify(self) -> int:
        family = (self.config.cone,) if self.config.cone is not None else DEFAULT_FAMILY
        suite = default_suite(family, self.tol, self.args.workers)
        trials = max(0, self.args.trials)
        results = suite.run(trials, self.seed)
        summary = summarize(results, self.seed, trials, family, self.tol)
        self.report("verify", summary)
        if not summary["passed"]:
            print(f"Invariant failed: {summary['first_failure']}", file=sys.stderr)
            return EXIT_FAILURE
        return EXIT_OK

    def _error(self, exc: Exception) -> None:
        message = sanitize_error_message(str(exc))
        logger.error(f"{type(exc).__name__}: {message}")
        print(f"{type(exc).__name__}: {message}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON configuration file")
    common.add_argument("--seed", help="Unsigned 64-bit seed (decimal or 0x-hex); falls back to SIEGEL_REDUCE_SEED")
    common.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                        help="Override a tolerance (repeatable)")
    common.add_argument("--out", type=Path, help="Also write the report to this path")
    common.add_argument("--no-log", action="store_true", help="Disable the log file")

    parser = argparse.ArgumentParser(prog="siegel_reduce",
                                     description="Symplectic reduction of tube domains by translation subgroups")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="Certify admissibility of the subspace")
    reduce_cmd = sub.add_parser("reduce", parents=[common], help="Reduce a point onto the zero level set")
    reduce_cmd.add_argument("--point", help='Point as JSON, e.g. {"re": [0, 0], "im": [2, 1]}')
    quotient_cmd = sub.add_parser("quotient", parents=[common], help="Sample the quotient cone (CSV)")
    quotient_cmd.add_argument("--samples", type=int, default=100, help="Number of quotient samples")
    lie_cmd = sub.add_parser("lie-test", parents=[common], help="Test a candidate subalgebra")
    lie_cmd.add_argument("--samples", type=int, default=100, help="Number of orbit samples")
    verify_cmd = sub.add_parser("verify", parents=[common], help="Run the invariant suite")
    verify_cmd.add_argument("--trials", type=int, default=100, help="Random instances per invariant")
    verify_cmd.add_argument("--workers", type=int, default=1, help="Worker threads per invariant")
    return parser


COMMANDS = {
    "check": Runner.cmd_check,
    "reduce": Runner.cmd_reduce,
    "quotient": Runner.cmd_quotient,
    "lie-test": Runner.cmd_lie_test,
    "verify": Runner.cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if not args.no_log:
        log_file = create_log_file("siegel_reduce")
        setup_logging(log_file)
        logger.info(f"Command {args.command} started")

    try:
        runner = Runner(args)
        code = COMMANDS[args.command](runner)
    except ConfigError as e:
        message = sanitize_error_message(str(e))
        logger.error(f"Configuration error [{e.key}]: {message}")
        print(f"Configuration error [{e.key}]: {message}", file=sys.stderr)
        return EXIT_CONFIG
    except SiegelReduceError as e:
        message = sanitize_error_message(str(e))
        logger.error(f"{type(e).__name__}: {message}")
        print(f"{type(e).__name__}: {message}", file=sys.stderr)
        return EXIT_FAILURE

    logger.info(f"Command {args.command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
