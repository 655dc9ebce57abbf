"""Command line client: run scenarios, validate configs, dump schemas.

Configs come from a JSON file (--config) plus --set key=value overrides,
flags winning over the file. Runs execute in process by default; pass
--server to hand the config to a running service instead. The report
JSON goes to output_path when the config names one, else to stdout; the
human-readable summary goes to stderr so stdout stays machine-clean.

Exit codes: 0 success, 1 numerical failure that aborted the run,
2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from . import __version__
from .errors import CtcLabError, PayloadError
from .models import (ScenarioConfig, ScenarioReport, schema_document,
                     validate_raw_config)
from .scenarios import report_to_csv, run_scenario

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_CONFIG = 2
EXIT_IO = 3

_SERVER_TIMEOUT = 600.0


class _CliError(Exception):
    """Carries the exit code for a failure already explained on stderr."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fail(code: int, message: str) -> _CliError:
    return _CliError(code, message)


def _assign(target: dict, dotted: str, value: object) -> None:
    parts = dotted.split(".")
    for part in parts[:-1]:
        node = target.setdefault(part, {})
        if not isinstance(node, dict):
            raise _fail(EXIT_CONFIG,
                        f"--set {dotted}: {part} is not an object")
        target = node
    target[parts[-1]] = value


def _load_raw_config(path: str | None, sets: list[str]) -> dict:
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise _fail(EXIT_IO, f"cannot read config {path}: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _fail(EXIT_CONFIG,
                        f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise _fail(EXIT_CONFIG,
                        f"config {path} must hold a JSON object")
    for item in sets:
        key, sep, text = item.partition("=")
        if not sep or not key:
            raise _fail(EXIT_CONFIG,
                        f"--set needs key=value, got {item!r}")
        try:
            value: object = json.loads(text)
        except json.JSONDecodeError:
            value = text
        _assign(raw, key, value)
    return raw


def _print_findings(findings) -> None:
    for finding in findings:
        print(f"config error: {finding.field}: {finding.message}",
              file=sys.stderr)


def _validated_config(raw: dict) -> ScenarioConfig:
    findings = validate_raw_config(raw)
    if findings:
        _print_findings(findings)
        raise _fail(EXIT_CONFIG, f"{len(findings)} config finding(s)")
    return ScenarioConfig.model_validate(raw)


def _run_remote(server: str, raw: dict) -> ScenarioReport:
    url = server.rstrip("/") + "/run"
    try:
        response = httpx.post(url, json=raw, timeout=_SERVER_TIMEOUT)
    except httpx.HTTPError as exc:
        raise _fail(EXIT_IO, f"cannot reach {url}: {exc}") from exc
    if response.status_code in (400, 422):
        raise _fail(EXIT_CONFIG,
                    f"server rejected the config: {response.text}")
    if response.status_code != 200:
        raise _fail(EXIT_NUMERICAL,
                    f"server run failed ({response.status_code}): "
                    f"{response.text}")
    return ScenarioReport.model_validate(response.json())


def _write_text(path: str, text: str, what: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as exc:
        raise _fail(EXIT_IO, f"cannot write {what} {path}: {exc}") from exc


def _cmd_run(args: argparse.Namespace) -> int:
    raw = _load_raw_config(args.config, args.set)
    config = _validated_config(raw)
    if args.server:
        report = _run_remote(args.server, raw)
    else:
        try:
            report = run_scenario(config)
        except PayloadError as exc:
            raise _fail(EXIT_CONFIG, f"payload error: {exc}") from exc
        except OSError as exc:
            raise _fail(EXIT_IO, f"file access failed: {exc}") from exc
        except CtcLabError as exc:
            raise _fail(EXIT_NUMERICAL, f"numerical failure: {exc}") from exc
    payload = report.model_dump_json(indent=2)
    if config.output_path:
        _write_text(config.output_path, payload + "\n", "report")
    else:
        print(payload)
    if args.csv:
        _write_text(args.csv, report_to_csv(report), "CSV table")
    if not args.quiet:
        summary = report.summary
        print(
            f"{config.scenario}: trials={config.trials} "
            f"records={len(report.records)} "
            f"witness_fraction={summary.witness_fraction:.6g} "
            f"max_spectrum_gap={summary.max_spectrum_gap:.6g} "
            f"max_residual={summary.max_residual:.3g} "
            f"failures={summary.failures} "
            f"wall_time_ms={summary.wall_time_ms:.1f}",
            file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    raw = _load_raw_config(args.config, args.set)
    if args.server:
        url = args.server.rstrip("/") + "/validate"
        try:
            response = httpx.post(url, json=raw, timeout=_SERVER_TIMEOUT)
        except httpx.HTTPError as exc:
            raise _fail(EXIT_IO, f"cannot reach {url}: {exc}") from exc
        body = response.json()
        print(json.dumps(body, indent=2))
        return EXIT_OK if body.get("valid") else EXIT_CONFIG
    findings = validate_raw_config(raw)
    print(json.dumps({
        "valid": not findings,
        "findings": [f.model_dump() for f in findings],
    }, indent=2))
    return EXIT_OK if not findings else EXIT_CONFIG


def _cmd_schema(args: argparse.Namespace) -> int:
    print(json.dumps(schema_document(), indent=2))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="JSON scenario configuration file")
    parser.add_argument("--set", metavar="KEY=VALUE", action="append",
                        default=[],
                        help="override a config field (dotted keys allowed, "
                             "values parsed as JSON, repeatable)")
    parser.add_argument("--server", metavar="URL",
                        help="send the request to a running service instead "
                             "of executing in process")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctc-lab",
        description="Numerical experiments on quantum systems interacting "
                    "with a closed timelike curve.")
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser(
        "run", help="execute a scenario and emit its JSON report")
    _add_config_arguments(run_parser)
    run_parser.add_argument("--csv", metavar="PATH",
                            help="also write the per-trial value table")
    run_parser.add_argument("--quiet", action="store_true",
                            help="suppress the stderr summary line")
    run_parser.set_defaults(handler=_cmd_run)

    validate_parser = commands.add_parser(
        "validate", help="check a config and list findings")
    _add_config_arguments(validate_parser)
    validate_parser.set_defaults(handler=_cmd_validate)

    schema_parser = commands.add_parser(
        "schema", help="print the config, report, and payload JSON schemas")
    schema_parser.set_defaults(handler=_cmd_schema)

    serve_parser = commands.add_parser(
        "serve", help="start the HTTP service")
    serve_parser.add_argument("--host", default="127.0.0.1")
    serve_parser.add_argument("--port", type=int, default=8000)
    serve_parser.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _CliError as exc:
        print(f"ctc-lab: {exc}", file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(f"ctc-lab: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
