"""HTTP facade over the core library.

Every CLI capability maps to one endpoint with a pydantic request model.
Validation failures surface as 422, domain errors (bad words, bad
parameters) as 400, and admissibility-gate rejections as 409.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .words import Signature, WordError, parse_word
from .magnus import expand
from .filtration import rank_table
from .cylmodel import CylModel, InadmissibleModel, compose, framing
from .suites import SUITES, run_suite

__all__ = ["app", "caret_diagnostic"]

app = FastAPI(title="freenil", version="1.0")


def caret_diagnostic(err: WordError) -> str:
    """Two extra lines pointing at the offending token, when known."""
    text = getattr(err, "text", None)
    pos = getattr(err, "pos", None)
    if text is None or pos is None:
        return str(err)
    return f"{err}\n  {text}\n  {' ' * pos}^"


class RanksRequest(BaseModel):
    g: int = Field(ge=0)
    n: int = Field(ge=1)
    kmax: int = Field(ge=2)
    format: str = Field(default="tsv", pattern="^(tsv|json)$")


class TextResponse(BaseModel):
    content: str


@app.post("/ranks", response_model=TextResponse)
def ranks(req: RanksRequest) -> TextResponse:
    try:
        table = rank_table(Signature(req.g, req.n), req.kmax)
    except ValueError as err:
        raise HTTPException(400, str(err))
    out = table.to_tsv() if req.format == "tsv" else table.to_json()
    return TextResponse(content=out)


class ExpandRequest(BaseModel):
    g: int = Field(ge=0)
    n: int = Field(ge=1)
    word: str
    trunc: int = Field(ge=0)


@app.post("/expand", response_model=TextResponse)
def expand_word(req: ExpandRequest) -> TextResponse:
    sig = Signature(req.g, req.n)
    try:
        w = parse_word(sig, req.word)
    except WordError as err:
        raise HTTPException(400, caret_diagnostic(err))
    return TextResponse(content=str(expand(w, req.trunc)) + "\n")


class ComposeRequest(BaseModel):
    models: list[dict] = Field(min_length=1)


class ComposeResponse(BaseModel):
    model: dict
    framing: list[int]


@app.post("/compose", response_model=ComposeResponse)
def compose_models(req: ComposeRequest) -> ComposeResponse:
    raw: list[CylModel] = []
    for obj in req.models:
        try:
            raw.append(CylModel.from_json(json.dumps(obj), checked=False))
        except (WordError, KeyError, TypeError, ValueError) as err:
            raise HTTPException(400, f"bad model: {err}")
    head = raw[0]
    for m in raw[1:]:
        if m.sig != head.sig or m.level != head.level:
            raise HTTPException(400, "models disagree on signature or level")
    # schema agreed; now run the admissibility gate on each input
    parsed: list[CylModel] = []
    for m in raw:
        try:
            parsed.append(CylModel.build(m.sig, m.level, m.mu, m.mu_p, m.mu_pp))
        except InadmissibleModel as err:
            raise HTTPException(409, f"inadmissible model: {err}")
    out = parsed[0]
    for m in parsed[1:]:
        out = compose(out, m)
    return ComposeResponse(model=json.loads(out.to_json()), framing=framing(out))


class VerifyRequest(BaseModel):
    suite: str
    seed: int = 0
    rmax: int | None = None
    kmax: int | None = None
    g: int | None = None
    n: int | None = None
    k: int | None = None
    trials: int | None = None


class VerifyResponse(BaseModel):
    ok: bool
    report: str
    failures: list[dict]
    wall_time: float


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    if req.suite not in SUITES:
        raise HTTPException(400, f"unknown suite {req.suite!r}; choose from "
                            + ", ".join(sorted(SUITES)))
    params = {
        k: v
        for k, v in req.model_dump().items()
        if k != "suite" and v is not None
    }
    try:
        rep = run_suite(req.suite, **params)
    except (TypeError, ValueError) as err:
        raise HTTPException(400, str(err))
    return VerifyResponse(
        ok=rep.ok,
        report=rep.render() + "\n",
        failures=[{"case": c.key, "witness": c.witness} for c in rep.failures()],
        wall_time=rep.wall_time,
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}
