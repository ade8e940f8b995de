"""FastAPI application wrapping the core package.

All computation is stateless and exact; the service is safe to share between
clients.  Domain errors map to HTTP 400 with a structured body; the
enumeration endpoint streams NDJSON so long runs deliver results
incrementally.
"""

from __future__ import annotations

import json
from fractions import Fraction

from fastapi import FastAPI
from fastapi.responses import JSONResponse, StreamingResponse

from .. import __version__
from ..errors import OrigamiError, ParseError
from ..cover import cover_veech_group, d_marking, parse_tuple
from ..moduli import (
    centralizer_group,
    cylinder_moduli,
    moduli_system,
    parse_moduli,
    realize_geometry,
)
from ..origami import (
    abelian_pair,
    double_cover,
    enumerate_origamis,
    format_origami,
    is_abelian,
    is_equivalent,
    parse_origami,
    singularity_profile,
)
from ..svg import render_svg
from ..veech import contains as veech_contains
from ..veech import orbit_stabilizer
from . import models as m


def _frac(f: Fraction) -> str:
    return str(f)


def _parse_dirs(text: str) -> tuple[Fraction, Fraction]:
    def one(tok: str) -> Fraction:
        tok = tok.strip().lower().replace(" ", "")
        if tok in ("0", "0pi"):
            return Fraction(0)
        if tok in ("pi",):
            return Fraction(1)
        if tok.startswith("pi/"):
            return Fraction(1, int(tok[3:]))
        if tok.endswith("pi") and "/" not in tok:
            return Fraction(tok[:-2] or 1)
        if "pi/" in tok:
            num, den = tok.split("pi/")
            return Fraction(int(num or 1), int(den))
        return Fraction(tok)

    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError("expected two comma-separated directions", 0)
    return one(parts[0]), one(parts[1])


def create_app() -> FastAPI:
    app = FastAPI(title="origamis", version=__version__)

    @app.exception_handler(OrigamiError)
    async def _domain_error(request, exc: OrigamiError):
        body = m.ErrorResponse(
            error=m.ErrorBody(
                type=exc.kind,
                message=str(exc),
                position=getattr(exc, "position", None),
            )
        )
        return JSONResponse(status_code=400, content=body.model_dump())

    def dump(model) -> JSONResponse:
        return JSONResponse(content=model.model_dump(by_alias=True, exclude_none=True))

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/info")
    def info(req: m.OrigamiRequest):
        O = parse_origami(req.origami)
        prof = singularity_profile(O)
        return dump(
            m.InfoResponse(
                degree=O.d,
                abelian=is_abelian(O),
                genus=prof.genus,
                orders=list(prof.orders),
                valency4=list(prof.valency4),
                poles=prof.poles,
                mu=str(O.mu),
                nu=str(O.nu),
                xye=format_origami(O, "xye"),
            )
        )

    @app.post("/double-cover")
    def double_cover_ep(req: m.DoubleCoverRequest):
        O = parse_origami(req.origami)
        dc = double_cover(O)
        comps = dc.components()
        pairs = []
        if len(comps) == 2:
            x, y = abelian_pair(O)
            pairs = [[str(x), str(y)], [str(x), str(y)]]
        return dump(
            m.DoubleCoverResponse(
                degree=2 * O.d,
                connected=dc.connected,
                components=len(comps),
                X=str(dc.X),
                Y=str(dc.Y),
                component_pairs=pairs,
            )
        )

    @app.post("/isomorphic")
    def isomorphic(req: m.IsomorphicRequest):
        O1 = parse_origami(req.origami_a)
        O2 = parse_origami(req.origami_b)
        w = is_equivalent(O1, O2)
        return dump(
            m.IsomorphicResponse(isomorphic=w is not None, witness=str(w) if w else None)
        )

    @app.post("/veech")
    def veech(req: m.VeechRequest):
        O = parse_origami(req.origami)
        res = orbit_stabilizer(O, req.mode)
        orbit_texts = []
        for state in res.orbit:
            if req.mode == "psl":
                orbit_texts.append(format_origami(state))
            else:
                x, y = state
                orbit_texts.append(f"x={x}; y={y}; eps={'+' * x.d}")
        return dump(
            m.VeechResponse(
                mode=res.mode,
                index=res.index,
                coset_reps=[str(w) for w in res.coset_reps],
                stabilizer_gens=[str(w) for w in res.stabilizer_gens],
                stabilizer_matrices=(
                    [[list(row) for row in mat] for mat in res.stabilizer_matrices]
                    if req.mode == "sl"
                    else None
                ),
                orbit=orbit_texts,
            )
        )

    @app.post("/contains")
    def contains_ep(req: m.ContainsRequest):
        O = parse_origami(req.origami)
        from ..veech import matrix_to_word

        word = matrix_to_word(req.matrix, req.mode)
        return dump(
            m.ContainsResponse(
                contains=veech_contains(O, req.matrix, req.mode), word=str(word)
            )
        )

    @app.post("/moduli")
    def moduli_ep(req: m.ModuliRequest):
        O = parse_origami(req.origami)
        ms = moduli_system(O)
        return dump(
            m.ModuliResponse(
                degree=O.d,
                rows=[list(r) for r in ms.A],
                kernel_dimension=ms.kernel_dimension,
                kernel_basis=[list(v) for v in ms.kernel_basis_integer()],
                centralizer_gens=[str(g) for g in ms.c_gens],
                centralizer_order=len(centralizer_group(O)),
            )
        )

    @app.post("/check-moduli")
    def check_moduli(req: m.CheckModuliRequest):
        from ..moduli import is_compatible

        O = parse_origami(req.origami)
        M = parse_moduli(req.moduli, O.d)
        return dump(m.CheckModuliResponse(compatible=is_compatible(O, M)))

    @app.post("/geometry")
    def geometry(req: m.GeometryRequest):
        O = parse_origami(req.origami)
        M = parse_moduli(req.moduli, O.d)
        geo = realize_geometry(O, M, _parse_dirs(req.dirs))
        return dump(
            m.GeometryResponse(
                widths=[_frac(w) for w in geo.widths],
                heights=[_frac(h) for h in geo.heights],
                area=_frac(geo.area),
                horizontal_cylinders=[list(r) for r in geo.horizontal_cylinders],
                vertical_cylinders=[list(c) for c in geo.vertical_cylinders],
                dirs=[f"{q}*pi" for q in geo.dirs],
            )
        )

    @app.post("/cylinders")
    def cylinders(req: m.CylindersRequest):
        O = parse_origami(req.origami)
        M = parse_moduli(req.moduli, O.d)
        vals = cylinder_moduli(O, M, req.direction)
        return dump(
            m.CylindersResponse(direction=req.direction, moduli=[_frac(v) for v in vals])
        )

    @app.post("/cover-veech")
    def cover_veech(req: m.CoverVeechRequest):
        if req.base != "D":
            raise ParseError("only the built-in base D is available", 0)
        marking = d_marking()
        t = parse_tuple(req.tuple, marking.num_generators)
        res = cover_veech_group(t, marking)
        return dump(
            m.CoverVeechResponse(
                index=res.index,
                coset_reps=list(res.coset_reps),
                stabilizer_gens=list(res.stabilizer_gens),
            )
        )

    @app.post("/render")
    def render(req: m.RenderRequest):
        O = parse_origami(req.origami)
        return dump(m.RenderResponse(svg=render_svg(O)))

    @app.get("/enumerate")
    def enumerate_ep(degree: int):
        origamis = enumerate_origamis(degree)

        def stream():
            for O in origamis:
                prof = singularity_profile(O)
                doc = {
                    "schema": m.SCHEMA_VERSION,
                    "origami": format_origami(O),
                    "abelian": is_abelian(O),
                    "genus": prof.genus,
                    "orders": list(prof.orders),
                }
                yield json.dumps(doc) + "\n"

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    return app
