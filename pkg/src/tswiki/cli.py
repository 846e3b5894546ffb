"""Command-line interface: serve the wiki, script the raw space, run scenarios."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from random import Random

from . import lab
from .oplog import LOG_FILENAME, CorruptLogError, PersistentSpace, compact, replay
from .space import MalformedTupleError, Template, WikiTuple
from .service import WikiService


def _log_path(data_dir: str) -> Path:
    return Path(data_dir) / LOG_FILENAME


def _parse_template(text: str) -> Template:
    try:
        fields = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedTupleError(f"--template is not valid JSON: {exc}") from exc
    return Template.from_list(fields)


def _cmd_serve(args) -> int:
    service = WikiService(
        args.data,
        admin_token=args.admin_token,
        seed=args.seed,
        host=args.host,
        port=args.port,
        ui_dir=args.ui,
    )
    print(f"serving on {service.url}  (data: {args.data})")
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        service.close()
    return 0


def _cmd_out(args) -> int:
    template = _parse_template(args.template)
    fields = template.as_list()
    if any(f is None for f in fields):
        raise MalformedTupleError("out needs all five fields; wildcards are read-only")
    t = WikiTuple.from_list(fields)
    space = PersistentSpace(_log_path(args.data))
    try:
        space.out(t)
    finally:
        space.close()
    print(json.dumps(t.as_list(), ensure_ascii=False))
    return 0


def _cmd_rd(args) -> int:
    template = _parse_template(args.template)
    space = replay(_log_path(args.data))
    rng = Random(args.seed) if args.seed is not None else Random()
    served = space.rdp(template, rng)
    print(json.dumps(served.tuple.as_list() if served else None, ensure_ascii=False))
    return 0


def _cmd_in(args) -> int:
    template = _parse_template(args.template)
    space = PersistentSpace(_log_path(args.data))
    rng = Random(args.seed) if args.seed is not None else Random()
    try:
        removed = space.inp(template, rng)
    finally:
        space.close()
    print(json.dumps(removed.as_list() if removed else None, ensure_ascii=False))
    return 0


def _cmd_compact(args) -> int:
    records = compact(_log_path(args.data))
    print(f"compacted to {records} records")
    return 0


def _cmd_sim_run(args) -> int:
    spec = lab.ScenarioSpec.from_json(Path(args.scenario).read_text(encoding="utf-8"))
    report = lab.run_scenario(spec, args.seed)
    print(report.to_json())
    print(lab.format_summary(report), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tswiki",
        description="Tuple-space wiki: pages are bags of revision tuples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8080)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--data", required=True, help="data directory (holds the op log)")
    serve.add_argument("--admin-token", required=True)
    serve.add_argument("--seed", type=int, default=None, help="seed the service RNG")
    serve.add_argument("--ui", default=None, help="static UI directory to serve at /ui/")
    serve.set_defaults(func=_cmd_serve)

    for name, func, doc in (
        ("out", _cmd_out, "add one tuple instance to the data dir"),
        ("rd", _cmd_rd, "print a copy of one matching tuple (or null)"),
        ("in", _cmd_in, "remove and print one matching tuple (or null)"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--data", required=True)
        p.add_argument(
            "--template",
            required=True,
            help='JSON 5-array [wikiword, author, rev, date, body]; null = wildcard',
        )
        if name != "out":
            p.add_argument("--seed", type=int, default=None)
        p.set_defaults(func=func)

    compact_p = sub.add_parser("compact", help="rewrite the op log as one out per instance")
    compact_p.add_argument("--data", required=True)
    compact_p.set_defaults(func=_cmd_compact)

    sim = sub.add_parser("sim", help="contention laboratory")
    sim_sub = sim.add_subparsers(dest="sim_command", required=True)
    run = sim_sub.add_parser("run", help="run a scenario file; JSON report on stdout")
    run.add_argument("scenario", help="scenario file (JSON)")
    run.add_argument("--seed", type=int, default=0)
    run.set_defaults(func=_cmd_sim_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedTupleError, CorruptLogError, lab.InvalidScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
