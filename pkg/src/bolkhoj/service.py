"""HTTP front door for the dialog engine.

All bodies are UTF-8 JSON except the audio query, which may be raw WAV
bytes with content type audio/wav.  Errors come back as 4xx with
{"error", "detail"}.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .audio import AudioFormatError, load_wav_bytes
from .session import (ConfigError, InputError, NavigationError, RangeError,
                      SessionEngine, StateError, UnknownSessionError)

ERROR_STATUS = {
    UnknownSessionError: 404,
    StateError: 409,
    RangeError: 422,
    NavigationError: 422,
    InputError: 400,
    ConfigError: 400,
    AudioFormatError: 400,
}


def _error_response(exc: Exception) -> JSONResponse:
    status = 400
    for cls, code in ERROR_STATUS.items():
        if isinstance(exc, cls):
            status = code
            break
    return JSONResponse(status_code=status,
                        content={"error": type(exc).__name__, "detail": str(exc)})


def create_app(engine: SessionEngine, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="bolkhoj", docs_url=None, redoc_url=None)

    @app.exception_handler(Exception)
    async def handle_known(request: Request, exc: Exception):
        if isinstance(exc, tuple(ERROR_STATUS)):
            return _error_response(exc)
        raise exc

    @app.post("/api/session")
    def create_session():
        session = engine.create_session()
        return {"id": session.id, "state": session.state}

    @app.post("/api/session/{session_id}/query")
    async def submit_query(session_id: str, request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("audio/wav"):
            body = await request.body()
            clip = load_wav_bytes(body, source_id="upload")
            engine.submit_query(session_id, clip=clip)
        else:
            payload = await request.json()
            text = payload.get("text")
            if not isinstance(text, str):
                raise InputError("body must be {\"text\": \"...\"} or audio/wav bytes")
            engine.submit_query(session_id, text=text)
        return engine.get_state(session_id)

    @app.post("/api/session/{session_id}/confirm")
    def confirm(session_id: str):
        engine.confirm(session_id)
        return engine.get_state(session_id)

    @app.post("/api/session/{session_id}/reject")
    def reject(session_id: str):
        engine.reject(session_id)
        return engine.get_state(session_id)

    @app.post("/api/session/{session_id}/select")
    async def select(session_id: str, request: Request):
        payload = await request.json()
        n = payload.get("n")
        if not isinstance(n, int):
            raise RangeError("body must be {\"n\": <positive integer>}")
        engine.select_link(session_id, n)
        return engine.get_state(session_id)

    @app.get("/api/session/{session_id}")
    def get_state(session_id: str):
        return engine.get_state(session_id)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
