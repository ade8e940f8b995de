"""Command-line client of the origamis service.

The CLI is a thin HTTP client: every command builds a request, sends it to
the service and formats the response.  By default the service runs
in-process (no separate server needed); pass ``--server URL`` or set
``ORIGAMIS_SERVER`` to talk to a remote instance.

Exit codes: 0 success, 1 domain error (with a structured message on stderr),
2 usage error.  ``--json`` prints the service's JSON document verbatim with
its stable key order.  Composition convention in every permutation output:
(p q)(i) = p(q(i)); cycle ``(1 2 3)`` maps 1 to 2.  Modulus convention:
height over width.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Optional

import httpx

__all__ = ["main", "run"]


def _read_arg(value: str) -> str:
    """Argument or @file indirection."""
    if value.startswith("@"):
        with open(value[1:], "r", encoding="utf-8") as fh:
            return fh.read().strip()
    return value


class _InProcessTransport(httpx.BaseTransport):
    """Synchronous bridge into the in-process ASGI app.

    Responses are buffered before returning, so streamed endpoints arrive in
    one piece here; true incremental streaming applies when talking to a
    remote server.
    """

    def __init__(self, app):
        self._transport = httpx.ASGITransport(app=app)

    def handle_request(self, request: httpx.Request) -> httpx.Response:
        import asyncio

        async def go():
            response = await self._transport.handle_async_request(request)
            body = await response.aread()
            await response.aclose()
            return response, body

        response, body = asyncio.run(go())
        return httpx.Response(
            status_code=response.status_code,
            headers=response.headers,
            content=body,
            request=request,
        )


def _client(server: Optional[str]) -> httpx.Client:
    server = server or os.environ.get("ORIGAMIS_SERVER")
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from .service import create_app

    transport = _InProcessTransport(create_app())
    return httpx.Client(transport=transport, base_url="http://origamis.local", timeout=None)


def _write_out(path: Optional[str], data: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(data)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".origamis-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fail(payload) -> int:
    if isinstance(payload, dict) and "error" in payload:
        err = payload["error"]
        pos = err.get("position")
        loc = f" (at position {pos})" if pos is not None else ""
        sys.stderr.write(f"error [{err.get('type')}]: {err.get('message')}{loc}\n")
    else:
        sys.stderr.write(f"error: {payload}\n")
    return 1


def _post(client: httpx.Client, path: str, body: dict):
    resp = client.post(path, json=body)
    try:
        payload = resp.json()
    except ValueError:
        payload = resp.text
    return resp.status_code, payload


def _matrix_arg(text: str) -> list[list[int]]:
    try:
        mat = json.loads(text)
        ok = (
            isinstance(mat, list)
            and len(mat) == 2
            and all(isinstance(r, list) and len(r) == 2 for r in mat)
            and all(isinstance(v, int) for r in mat for v in r)
        )
        if not ok:
            raise ValueError
        return mat
    except ValueError:
        raise argparse.ArgumentTypeError("matrix must look like [[a,b],[c,d]] with integers")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="origamis",
        description="Exact computations on general origamis (square-tiled "
        "half-translation surfaces).",
    )
    p.add_argument("--server", help="URL of a running origamis service "
                   "(default: in-process; env ORIGAMIS_SERVER)")
    p.add_argument("--json", action="store_true", help="emit the raw JSON document")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_, origami=True):
        sp = sub.add_parser(name, help=help_)
        if origami:
            sp.add_argument("origami", help="origami text (x=..;y=..;eps=.. or "
                            "mu=..;nu=..) or @file")
        return sp

    add("info", "degree, abelian flag, genus, orders, valency list")
    add("double-cover", "canonical double cover and its components")
    sp = sub.add_parser("isomorphic", help="equivalence witness of two origamis")
    sp.add_argument("origami_a")
    sp.add_argument("origami_b")
    sp = add("veech", "Veech group index, coset and stabilizer words")
    sp.add_argument("--mode", choices=("psl", "sl"), default="psl")
    sp = add("orbit", "list the generator-action orbit")
    sp.add_argument("--mode", choices=("psl", "sl"), default="psl")
    sp = add("contains", "membership of a unimodular matrix in the Veech group")
    sp.add_argument("matrix", type=_matrix_arg, help="[[a,b],[c,d]]")
    sp.add_argument("--mode", choices=("psl", "sl"), default="psl")
    add("moduli", "exponent rows, exact kernel basis, automorphisms")
    sp = add("check-moduli", "compatibility of a moduli list")
    sp.add_argument("moduli", help="comma-separated positive rationals")
    sp = add("geometry", "rectangle realization of a compatible moduli list")
    sp.add_argument("moduli")
    sp.add_argument("--dirs", default="0,pi/2", help="direction pair, e.g. 0,pi/2")
    sp = add("cylinders", "ascending cylinder moduli")
    sp.add_argument("moduli")
    sp.add_argument("--direction", choices=("horizontal", "vertical"), default="horizontal")
    sp = sub.add_parser("cover-veech", help="Veech group of an unbranched cover of D")
    sp.add_argument("tuple", help="N=..; tau0=(..); ...; tau6=(..) or @file")
    sp = sub.add_parser("enumerate", help="connected origamis of a degree, one per line")
    sp.add_argument("degree", type=int)
    sp = add("render", "SVG drawing of the square tiling")
    sp.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8000)
    return p


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2))


def run(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    with _client(args.server) as client:
        if args.command == "enumerate":
            with client.stream("GET", "/enumerate", params={"degree": args.degree}) as resp:
                if resp.status_code != 200:
                    resp.read()
                    return _fail(json.loads(resp.text) if resp.text else resp.status_code)
                docs = []
                for line in resp.iter_lines():
                    if not line.strip():
                        continue
                    if args.json:
                        docs.append(json.loads(line))
                    else:
                        doc = json.loads(line)
                        print(doc["origami"])
                if args.json:
                    _print_json({"schema": 1, "degree": args.degree, "count": len(docs),
                                 "origamis": docs})
            return 0

        body: dict
        path = "/" + args.command
        if args.command == "isomorphic":
            body = {
                "origami_a": _read_arg(args.origami_a),
                "origami_b": _read_arg(args.origami_b),
            }
        elif args.command == "contains":
            body = {"origami": _read_arg(args.origami), "matrix": args.matrix,
                    "mode": args.mode}
        elif args.command in ("veech", "orbit"):
            path = "/veech"
            body = {"origami": _read_arg(args.origami), "mode": args.mode}
        elif args.command == "check-moduli":
            body = {"origami": _read_arg(args.origami), "moduli": args.moduli}
        elif args.command == "geometry":
            body = {"origami": _read_arg(args.origami), "moduli": args.moduli,
                    "dirs": args.dirs}
        elif args.command == "cylinders":
            body = {"origami": _read_arg(args.origami), "moduli": args.moduli,
                    "direction": args.direction}
        elif args.command == "cover-veech":
            body = {"tuple": _read_arg(args.tuple), "base": "D"}
        else:
            body = {"origami": _read_arg(args.origami)}

        status, payload = _post(client, path, body)
        if status != 200:
            return _fail(payload)

        if args.command == "render":
            if args.json:
                _print_json(payload)
            else:
                _write_out(args.output, payload["svg"])
            return 0
        if args.json:
            _print_json(payload)
            return 0
        _print_text(args.command, payload)
    return 0


def _print_text(command: str, payload: dict) -> None:
    if command == "info":
        print(f"degree: {payload['degree']}")
        print(f"abelian: {str(payload['abelian']).lower()}")
        print(f"genus: {payload['genus']}")
        print(f"orders: {','.join(map(str, payload['orders'])) or '-'}")
        print(f"valency: {','.join(map(str, payload['valency4']))}")
        print(f"poles: {payload['poles']}")
        print(f"mu: {payload['mu']}")
        print(f"nu: {payload['nu']}")
        print(f"xye: {payload['xye']}")
    elif command == "double-cover":
        print(f"degree: {payload['degree']}")
        print(f"components: {payload['components']}")
        print(f"X: {payload['X']}")
        print(f"Y: {payload['Y']}")
    elif command == "isomorphic":
        if payload["isomorphic"]:
            print(f"isomorphic: witness {payload['witness']}")
        else:
            print("not isomorphic")
    elif command == "veech":
        print(f"mode: {payload['mode']}")
        print(f"index: {payload['index']}")
        print(f"coset reps: {' '.join(payload['coset_reps'])}")
        print(f"stabilizer: {' '.join(payload['stabilizer_gens']) or '-'}")
        if payload.get("stabilizer_matrices"):
            for w, mat in zip(payload["stabilizer_gens"], payload["stabilizer_matrices"]):
                print(f"  {w}: {mat}")
    elif command == "orbit":
        for text in payload["orbit"]:
            print(text)
    elif command == "contains":
        print(f"word: {payload['word']}")
        print("contained" if payload["contains"] else "not contained")
    elif command == "moduli":
        print(f"kernel dimension: {payload['kernel_dimension']}")
        for v in payload["kernel_basis"]:
            print(f"kernel: {v}")
        print(f"automorphism order: {payload['centralizer_order']}")
        for g in payload["centralizer_gens"]:
            print(f"automorphism: {g}")
    elif command == "check-moduli":
        print("compatible" if payload["compatible"] else "incompatible")
    elif command == "geometry":
        print(f"widths: {','.join(payload['widths'])}")
        print(f"heights: {','.join(payload['heights'])}")
        print(f"area: {payload['area']}")
        print(f"horizontal cylinders: {payload['horizontal_cylinders']}")
        print(f"vertical cylinders: {payload['vertical_cylinders']}")
    elif command == "cylinders":
        print(",".join(payload["moduli"]))
    elif command == "cover-veech":
        print(f"index: {payload['index']}")
        print(f"coset reps: {' '.join(payload['coset_reps'])}")
        print(f"stabilizer: {' '.join(payload['stabilizer_gens']) or '-'}")
    else:  # pragma: no cover
        _print_json(payload)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
