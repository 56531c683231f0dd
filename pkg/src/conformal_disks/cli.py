"""Command-line client for the service endpoints.

Subcommands: correlator, cocycle, green-expand, growth-check,
operad-compose, verify.  Input is line-delimited JSON records from a
file or stdin; output is line-delimited records on stdout (or --out).
Exit codes: 0 pass, 1 check failure, 2 usage or parse error.

The commands run the HTTP service in process; no server needs to be up.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from . import records
from .config import DEFAULT_TRUNCATION

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _post(path: str, payload: dict) -> httpx.Response:
    from .service import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://conformal-disks"
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _read_records(path: str) -> list[dict]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return [records.loads(line) for line in text.splitlines() if line.strip()]


class _Output:
    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []

    def emit(self, rec: dict) -> None:
        self.lines.append(records.dumps(rec))

    def flush(self) -> None:
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _fail(out: _Output, kind: str, detail: str) -> int:
    out.emit({"error": kind, "detail": detail})
    out.flush()
    return EXIT_USAGE


def _service_error(out: _Output, resp: httpx.Response) -> int:
    body = resp.json()
    if "error" not in body:  # pydantic request validation
        body = {"error": "parse", "detail": json.dumps(body.get("detail", body))}
    out.emit(body)
    out.flush()
    return EXIT_USAGE


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_correlator(args, out: _Output) -> int:
    recs = _read_records(args.input)
    if len(recs) < 1:
        return _fail(out, "parse", "expected a configuration record")
    resp = _post("/correlator", {"config": recs[0], "observables": recs[1:]})
    if resp.status_code != 200:
        return _service_error(out, resp)
    body = resp.json()
    out.emit({"value": body["value"], "matchings": body["matchings"]})
    out.flush()
    return EXIT_OK


def cmd_cocycle(args, out: _Output) -> int:
    recs = _read_records(args.input)
    if not recs:
        return _fail(out, "parse", "expected a map record")
    payload = {"phi": recs[0], "trunc": args.trunc, "grid": args.grid}
    if len(recs) > 1:
        payload["psi"] = recs[1]
    resp = _post("/cocycle", payload)
    if resp.status_code != 200:
        return _service_error(out, resp)
    body = resp.json()
    out.emit(
        {
            "table_max": body["table_max"],
            "identity_residual": body["identity_residual"],
            "schwarzian_residual": body["schwarzian_residual"],
        }
    )
    out.emit({"a_table": body["a_table"]})
    out.flush()
    return EXIT_OK


def cmd_green_expand(args, out: _Output) -> int:
    recs = _read_records(args.input)
    if len(recs) != 1:
        return _fail(out, "parse", "expected one record with x and y")
    rec = recs[0]
    if "x" not in rec or "y" not in rec:
        return _fail(out, "parse", "record needs 'x' and 'y' point fields")
    dim = args.dim or rec.get("dim") or len(rec["x"])
    degree = args.trunc if args.trunc is not None else rec.get("degree", 16)
    resp = _post(
        "/green-expand", {"dim": dim, "x": rec["x"], "y": rec["y"], "degree": degree}
    )
    if resp.status_code != 200:
        return _service_error(out, resp)
    body = resp.json()
    out.emit(
        {
            "value": body["value"],
            "exact": body["exact"],
            "residual": body["residual"],
            "terms": body["terms"],
        }
    )
    out.flush()
    return EXIT_OK


def cmd_growth_check(args, out: _Output) -> int:
    recs = _read_records(args.input)
    if len(recs) != 1:
        return _fail(out, "parse", "expected one distribution record")
    resp = _post("/growth-check", {"distribution": recs[0]})
    if resp.status_code != 200:
        return _service_error(out, resp)
    body = resp.json()
    rec = {"certified": body["certified"]}
    if body["certified"]:
        rec["C"], rec["rho"] = body["C"], body["rho"]
    out.emit(rec)
    out.flush()
    return EXIT_OK


def cmd_operad_compose(args, out: _Output) -> int:
    recs = _read_records(args.input)
    if len(recs) != 2:
        return _fail(out, "parse", "expected outer and inner configuration records")
    resp = _post(
        "/operad-compose", {"outer": recs[0], "inner": recs[1], "slot": args.slot}
    )
    if resp.status_code != 200:
        return _service_error(out, resp)
    body = resp.json()
    out.emit(body["config"])
    out.emit(
        {
            "disjointness_margin": body["disjointness_margin"],
            "containment_margin": body["containment_margin"],
        }
    )
    out.flush()
    return EXIT_OK


def cmd_verify(args, out: _Output) -> int:
    payload = {
        "selector": args.selector,
        "dim": args.dim or 2,
        "truncation": args.trunc if args.trunc is not None else DEFAULT_TRUNCATION,
        "samples": args.samples,
        "seed": args.seed,
    }
    if args.tol is not None:
        payload["tol_single"] = payload["tol_double"] = args.tol
    resp = _post("/verify", payload)
    if resp.status_code != 200:
        return _service_error(out, resp)
    body = resp.json()
    for rec in body["reports"]:
        out.emit(rec)
    out.flush()
    return EXIT_OK if body["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdisk", description="conformal disk toolkit commands"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_input: bool = True):
        if with_input:
            p.add_argument(
                "input", nargs="?", default="-", help="record file, '-' for stdin"
            )
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--trunc", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write output records to this path")

    p = sub.add_parser("correlator", help="vacuum state of a configuration product")
    common(p)
    p.set_defaults(fn=cmd_correlator)

    p = sub.add_parser("cocycle", help="cocycle table, identity and Schwarzian checks")
    common(p)
    p.add_argument("--grid", type=int, default=20)
    p.set_defaults(fn=cmd_cocycle, trunc_default=24)

    p = sub.add_parser("green-expand", help="zonal expansion of the Green kernel")
    common(p)
    p.set_defaults(fn=cmd_green_expand)

    p = sub.add_parser("growth-check", help="fit and verify a decay certificate")
    common(p)
    p.set_defaults(fn=cmd_growth_check)

    p = sub.add_parser("operad-compose", help="substitute one configuration into another")
    common(p)
    p.add_argument("--slot", type=int, default=1)
    p.set_defaults(fn=cmd_operad_compose)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("selector", help="harmonic|cocycle|contraction|operad|anomaly|all")
    common(p, with_input=False)
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "cocycle" and args.trunc is None:
        args.trunc = 24
    out = _Output(args.out)
    try:
        return args.fn(args, out)
    except records.RecordError as exc:
        return _fail(out, "parse", str(exc))
    except OSError as exc:
        return _fail(out, "io", str(exc))


if __name__ == "__main__":
    sys.exit(main())
