"""Command line front door: ``ywkit verify <suite>``.

Exit codes: 0 all checks pass, 1 some check failed, 2 config or schema
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import jsonschema
import yaml

from . import __version__
from .algebra import Signature, to_fraction
from .report import Report, canonical
from .suites import PLAIN_ONLY, SUITES, SuiteConfig, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3
JOBS_ENV = "YWKIT_JOBS"

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_SIG = {"oneOf": [{"type": "integer", "minimum": 1}, {"type": "string"}]}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "suites": {"type": "array", "items": {"type": "string"}},
        "sig": {"oneOf": [_SIG, {"type": "array", "items": _SIG, "minItems": 1}]},
        "p": {"oneOf": [{"type": "integer", "minimum": 1},
                        {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}]},
        "theta": {"enum": ["plus", "minus"]},
        "params": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        "momenta": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        "m_max": {"type": "integer", "minimum": 0},
        "jobs": {"type": "integer", "minimum": 1},
        "format": {"enum": ["json", "text"]},
        "out": {"type": "string"},
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["body", "meta"],
    "properties": {
        "body": {
            "type": "object",
            "required": ["suite", "passed", "checks", "tool_version", "config_hash"],
            "properties": {
                "suite": {"type": "string"},
                "passed": {"type": "boolean"},
                "tool_version": {"type": "string"},
                "config_hash": {"type": "string"},
                "checks": {"type": "array", "items": {
                    "type": "object",
                    "required": ["name", "status", "details"],
                    "properties": {
                        "name": {"type": "string"},
                        "status": {"enum": ["pass", "fail", "skipped"]},
                        "details": {"type": "object"},
                        "counterexample": {},
                    },
                }},
            },
        },
        "meta": {"type": "object", "required": ["wall_time_s"]},
    },
}


class ConfigError(ValueError):
    pass


def load_config_file(path: str) -> dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        data = json.loads(text) if path.endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"config is not valid JSON/YAML: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return data


def _as_list(x: Any) -> list:
    return x if isinstance(x, list) else [x]


def build_config(raw: dict[str, Any], suite: str | None, args: argparse.Namespace) -> SuiteConfig:
    """Merge file and flags (flags win), validate schema and constraints."""
    merged = dict(raw)
    for key in ("sig", "p", "theta", "jobs", "format", "out"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        jsonschema.validate(merged, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"schema: {exc.message}") from None

    if suite is not None:
        suites = [suite]
    elif "suites" in merged:
        suites = list(merged["suites"])
    elif "suite" in merged:
        suites = [merged["suite"]]
    else:
        suites = []
    if not suites:
        raise ConfigError("empty suite list")
    for s in suites:
        if s not in SUITES and s != "all":
            raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES + ('all',))}")
    if "all" in suites and len(suites) > 1:
        raise ConfigError("'all' cannot be combined with other suites")

    sigs = None
    if "sig" in merged:
        sigs = []
        for text in _as_list(merged["sig"]):
            try:
                sigs.append(Signature.parse(text))
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
    theta = merged.get("theta")
    for sig in sigs or []:
        plain_only = [s for s in suites if s in PLAIN_ONLY or s == "all"]
        if sig.graded and plain_only:
            raise ConfigError(f"sig {sig}: suite {plain_only[0]} needs a plain signature (graded twists live in 'super')")
        if theta == "minus" and sig.graded:
            raise ConfigError(f"theta=minus at sig {sig}: the symplectic class exists for plain signatures only")
        if theta == "minus" and sig.total % 2:
            raise ConfigError(f"theta=minus at N={sig.total}: a symplectic form needs even N")
        if sig.graded and sig.n % 2 and "super" in suites:
            raise ConfigError(f"sig {sig}: the super twist needs an odd block of even size")

    def fracs(key: str) -> list | None:
        if key not in merged:
            return None
        return [[to_fraction(x) for x in row] for row in merged[key]]

    momenta = fracs("momenta")
    for row in momenta or []:
        if len(set(row)) != len(row):
            raise ConfigError(f"momenta {[str(k) for k in row]} are not pairwise distinct")

    jobs = merged.get("jobs")
    if jobs is None:
        env = os.environ.get(JOBS_ENV, "1")
        try:
            jobs = int(env)
        except ValueError:
            raise ConfigError(f"{JOBS_ENV}={env!r} is not an integer") from None
        if jobs < 1:
            raise ConfigError(f"{JOBS_ENV} must be positive")

    return SuiteConfig(
        suites=suites,
        sigs=[str(s) for s in sigs] if sigs else None,
        p=_as_list(merged["p"]) if "p" in merged else None,
        theta=theta,
        params=fracs("params"),
        momenta=momenta,
        m_max=merged.get("m_max", 3),
        jobs=jobs,
        output=merged.get("out"),
        format=merged.get("format", "json"),
    )


def config_hash(cfg: SuiteConfig) -> str:
    # job width, output path and format do not change the results
    key = {"suites": cfg.suites, "sigs": cfg.sigs, "p": cfg.p, "theta": cfg.theta,
           "params": cfg.params, "momenta": cfg.momenta, "m_max": cfg.m_max}
    blob = json.dumps(canonical(key), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def report_body(report: Report, cfg: SuiteConfig) -> dict[str, Any]:
    body = report.sorted().to_json()
    body["tool_version"] = __version__
    body["config_hash"] = config_hash(cfg)
    return body


def emit_report(body: dict[str, Any], meta: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"body": body, "meta": meta}, sort_keys=True, indent=2) + "\n"
    lines = []
    failed = [c for c in body["checks"] if c["status"] == "fail"]
    if failed:
        lines.append("COUNTEREXAMPLES")
        for c in failed:
            lines.append(f"  {c['name']}")
            lines.append(f"    {json.dumps(c.get('counterexample'), sort_keys=True)}")
        lines.append("")
    lines.append(f"suite {body['suite']}  version {body['tool_version']}  config {body['config_hash'][:12]}")
    for c in body["checks"]:
        lines.append(f"  {c['status'].upper():7} {c['name']}")
    n_pass = sum(c["status"] == "pass" for c in body["checks"])
    lines.append(f"{n_pass}/{len(body['checks'])} passed, {len(failed)} failed"
                 f"  ({meta['wall_time_s']:.2f}s)")
    lines.append("RESULT " + ("PASS" if body["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ywkit", description="Exact checks for Yangians and twisted Yangians.")
    sub = ap.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", nargs="?", help=f"one of {', '.join(SUITES)}, all")
    v.add_argument("--config", help="JSON or YAML config file")
    v.add_argument("--sig", help="signature N or M|N")
    v.add_argument("--p", type=int, help="truncation level")
    v.add_argument("--theta", choices=["plus", "minus"])
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=["json", "text"])
    v.add_argument("--jobs", type=int, help=f"parallel workers (default ${JOBS_ENV} or 1)")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        raw = load_config_file(args.config) if args.config else {}
        cfg = build_config(raw, args.suite, args)
    except ConfigError as exc:
        print(f"ywkit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        report = run_suite(cfg)
    except Exception as exc:  # noqa: BLE001
        print(f"ywkit: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    meta = {"wall_time_s": round(time.perf_counter() - start, 3)}
    text = emit_report(report_body(report, cfg), meta, cfg.format)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
