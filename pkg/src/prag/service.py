"""HTTP front end: batch runs, formula evaluation and server-side REPL sessions."""

from __future__ import annotations

import threading
import uuid

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dynamics import Strategy
from .effects import render_trace
from .grammar import GrammarError, load_lexicon
from .logic import pretty
from .presup import Accommodation, Policy
from .session import SessionState, error_kind, eval_formula, exit_code, repl_step, run_text

app = FastAPI(title="prag", description="Effect-based compositional semantics engine")


class RunRequest(BaseModel):
    discourse: str
    lexicon: str = ""
    accommodation: Accommodation = Accommodation.TRAPPED
    strategy: Strategy = Strategy.RECENCY
    trace: bool = False


class RunResponse(BaseModel):
    formula: str
    context: list[str]
    trace: list[str]
    output: str


class EvalRequest(BaseModel):
    model: str
    formula: str


class EvalResponse(BaseModel):
    value: bool


class ErrorResponse(BaseModel):
    error: str
    kind: str
    exit_code: int


class SessionCreate(BaseModel):
    lexicon: str = ""
    accommodation: Accommodation = Accommodation.TRAPPED
    trace: bool = False


class SessionInfo(BaseModel):
    id: str
    sentences: int
    context: list[str]


class StepRequest(BaseModel):
    line: str


class StepResponse(BaseModel):
    output: str
    ok: bool
    sentences: int


class _Sessions:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._states: dict[str, SessionState] = {}
        self._locks: dict[str, threading.Lock] = {}

    def create(self, state: SessionState) -> str:
        sid = uuid.uuid4().hex
        with self._lock:
            self._states[sid] = state
            self._locks[sid] = threading.Lock()
        return sid

    def get(self, sid: str) -> SessionState:
        with self._lock:
            if sid not in self._states:
                raise HTTPException(status_code=404, detail=f"no session {sid}")
            return self._states[sid]

    def step(self, sid: str, line: str) -> tuple[SessionState, str]:
        self.get(sid)
        with self._locks[sid]:
            state, output = repl_step(self._states[sid], line)
            self._states[sid] = state
        return state, output

    def delete(self, sid: str) -> None:
        with self._lock:
            if self._states.pop(sid, None) is None:
                raise HTTPException(status_code=404, detail=f"no session {sid}")
            self._locks.pop(sid, None)


sessions = _Sessions()


def _error(err: Exception) -> JSONResponse:
    body = ErrorResponse(error=str(err), kind=error_kind(err), exit_code=exit_code(err))
    return JSONResponse(status_code=400, content=body.model_dump())


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/run", response_model=RunResponse, responses={400: {"model": ErrorResponse}})
def run(req: RunRequest):
    try:
        lexicon = load_lexicon(req.lexicon)
        result = run_text(req.discourse, lexicon, Policy(req.accommodation), req.strategy)
    except Exception as err:
        return _error(err)
    return RunResponse(
        formula=pretty(result.formula),
        context=result.context.render(),
        trace=render_trace(result.trace),
        output=result.render(req.trace),
    )


@app.post("/eval", response_model=EvalResponse, responses={400: {"model": ErrorResponse}})
def evaluate(req: EvalRequest):
    try:
        return EvalResponse(value=eval_formula(req.model, req.formula))
    except Exception as err:
        return _error(err)


@app.post("/sessions", response_model=SessionInfo, responses={400: {"model": ErrorResponse}})
def create_session(req: SessionCreate):
    try:
        lexicon = load_lexicon(req.lexicon)
    except GrammarError as err:
        return _error(err)
    state = SessionState(lexicon=lexicon, policy=Policy(req.accommodation), trace=req.trace)
    sid = sessions.create(state)
    return SessionInfo(id=sid, sentences=0, context=[])


@app.get("/sessions/{sid}", response_model=SessionInfo)
def get_session(sid: str):
    state = sessions.get(sid)
    return SessionInfo(id=sid, sentences=state.sentences, context=state.context.render())


@app.post("/sessions/{sid}/step", response_model=StepResponse)
def step(sid: str, req: StepRequest):
    state, output = sessions.step(sid, req.line)
    if state.finished:
        sessions.delete(sid)
    return StepResponse(output=output, ok=not output.startswith("error:"), sentences=state.sentences)


@app.delete("/sessions/{sid}")
def delete_session(sid: str):
    sessions.delete(sid)
    return {"deleted": sid}
