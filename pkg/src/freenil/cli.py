"""Command-line client.

The CLI is a thin client over the HTTP service: by default it mounts the
app in-process (no socket), and --server points it at a remote instance
instead. Exit codes: 0 success, 1 verification failure, 2 usage or
domain error, 3 admissibility-gate rejection.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_GATE = 3


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process default: mount the ASGI app without opening a socket
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(args: argparse.Namespace, path: str, payload: dict) -> httpx.Response:
    with _client(args.server) as client:
        return client.post(path, json=payload)


def _fail(resp: httpx.Response) -> int:
    detail = resp.json().get("detail", resp.text)
    if isinstance(detail, str):
        print(f"error: {detail}", file=sys.stderr)
    else:
        print(f"error: {json.dumps(detail)}", file=sys.stderr)
    if resp.status_code == 409:
        return EXIT_GATE
    return EXIT_USAGE


def cmd_ranks(args: argparse.Namespace) -> int:
    resp = _post(
        args,
        "/ranks",
        {"g": args.g, "n": args.n, "kmax": args.kmax, "format": args.format},
    )
    if resp.status_code != 200:
        return _fail(resp)
    sys.stdout.write(resp.json()["content"])
    return EXIT_OK


def cmd_expand(args: argparse.Namespace) -> int:
    resp = _post(
        args,
        "/expand",
        {"g": args.g, "n": args.n, "word": args.word, "trunc": args.trunc},
    )
    if resp.status_code != 200:
        return _fail(resp)
    sys.stdout.write(resp.json()["content"])
    return EXIT_OK


def cmd_compose(args: argparse.Namespace) -> int:
    models = []
    for path in args.files:
        try:
            with open(path) as fh:
                models.append(json.load(fh))
        except (OSError, json.JSONDecodeError) as err:
            print(f"error: {path}: {err}", file=sys.stderr)
            return EXIT_USAGE
    resp = _post(args, "/compose", {"models": models})
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    sys.stdout.write(json.dumps(data["model"], indent=2) + "\n")
    sys.stdout.write("framing: " + json.dumps(data["framing"]) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    payload = {"suite": args.suite, "seed": args.seed}
    for key in ("rmax", "kmax", "g", "n", "k", "trials"):
        val = getattr(args, key)
        if val is not None:
            payload[key] = val
    resp = _post(args, "/verify", payload)
    if resp.status_code != 200:
        return _fail(resp)
    data = resp.json()
    sys.stdout.write(data["report"])
    print(f"wall time: {data['wall_time']:.2f}s", file=sys.stderr)
    if not data["ok"]:
        witness_path = f"witness-{args.suite}.json"
        with open(witness_path, "w") as fh:
            json.dump({"suite": args.suite, "params": payload,
                       "failures": data["failures"]}, fh, indent=2)
        print(f"witness written to {witness_path}", file=sys.stderr)
        return EXIT_VERIFY_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freenil",
        description="Exact computations in free nilpotent quotients: rank "
        "tables, Magnus expansions, model composition, verification suites.",
    )
    parser.add_argument("--server", default=None, metavar="URL",
                        help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ranks", help="graded rank table for a surface type")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=cmd_ranks)

    p = sub.add_parser("expand", help="truncated series expansion of a word")
    p.add_argument("--g", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--trunc", type=int, required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("compose", help="compose model files left to right")
    p.add_argument("files", nargs="+", metavar="MODEL_JSON")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rmax", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--g", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_USAGE if err.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
