"""HTTP surface over GameService: stdlib threading server, JSON bodies,
machine-readable error codes, optional static file serving for the web
playground, and a background flush worker drained on shutdown."""

from __future__ import annotations

import json
import re
import sys
import threading
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ..agents import UnknownAgent
from ..core import GameRecord, InvalidConfig, InvalidRecord
from .sessions import GameService, IllegalMove, NotYourTurn, SessionNotFound
from .store import FlushWorker, StoreUnavailable

_ERROR_CODES: list[tuple[type[Exception], str, int]] = [
    (IllegalMove, "ILLEGAL_MOVE", 400),
    (NotYourTurn, "NOT_YOUR_TURN", 409),
    (SessionNotFound, "NOT_FOUND", 404),
    (UnknownAgent, "UNKNOWN_AGENT", 400),
    (InvalidRecord, "INVALID_RECORD", 400),
    (InvalidConfig, "INVALID_CONFIG", 400),
    (StoreUnavailable, "STORE_UNAVAILABLE", 503),
]

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript",
    ".mjs": "application/javascript",
    ".css": "text/css",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

_SESSION_MOVES = re.compile(r"^/api/sessions/([0-9a-f]+)/moves$")
_SESSION_VIEW = re.compile(r"^/api/sessions/([0-9a-f]+)$")


class ApiHandler(BaseHTTPRequestHandler):
    service: GameService  # set by make_server
    static_dir: Path | None = None
    quiet: bool = True

    # -- plumbing -----------------------------------------------------------

    def log_message(self, fmt: str, *args) -> None:
        if not self.quiet:
            sys.stderr.write("%s - %s\n" % (self.address_string(), fmt % args))

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def _send_error(self, exc: Exception) -> None:
        for exc_type, code, status in _ERROR_CODES:
            if isinstance(exc, exc_type):
                self._send_json(status, {"error": {"code": code, "message": str(exc)}})
                return
        self._send_json(500, {"error": {"code": "INTERNAL", "message": str(exc)}})

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = self.rfile.read(length)
        try:
            parsed = json.loads(raw.decode())
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(parsed, dict):
            raise InvalidConfig("request body must be a JSON object")
        return parsed

    # -- routes -------------------------------------------------------------

    def do_OPTIONS(self) -> None:  # CORS preflight for the playground dev server
        self.send_response(HTTPStatus.NO_CONTENT)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self) -> None:
        url = urlparse(self.path)
        try:
            if url.path == "/api/health":
                self._send_json(200, {"status": "ok"})
                return
            if url.path == "/api/leaderboard":
                query = parse_qs(url.query)
                limit = int(query["limit"][0]) if "limit" in query else None
                self._send_json(200, {"entries": self.service.leaderboard_entries(limit)})
                return
            match = _SESSION_VIEW.match(url.path)
            if match:
                self._send_json(200, self.service.view(match.group(1)))
                return
            if self.static_dir is not None:
                self._serve_static(url.path)
                return
            self._send_json(404, {"error": {"code": "NOT_FOUND", "message": f"no route {url.path}"}})
        except Exception as exc:  # noqa: BLE001 - every error becomes a coded reply
            self._send_error(exc)

    def do_POST(self) -> None:
        url = urlparse(self.path)
        try:
            body = self._read_body()
            if url.path == "/api/sessions":
                reply = self.service.create_session(
                    game=body.get("game", ""),
                    params=body.get("config") or body.get("params") or {},
                    agent_descriptor=body.get("agent", "exact"),
                    participant=body.get("participant", "anonymous"),
                    human_seat=body.get("human_seat", "first"),
                    seed=body.get("seed"),
                )
                self._send_json(200, reply)
                return
            match = _SESSION_MOVES.match(url.path)
            if match:
                if "action" not in body:
                    raise IllegalMove("body must include an 'action'")
                self._send_json(200, self.service.submit_move(match.group(1), body["action"]))
                return
            if url.path == "/api/records":
                if "record" not in body:
                    raise InvalidRecord("body must include a 'record' object")
                record = GameRecord.from_json(json.dumps(body["record"]))
                delta = self.service.record_result(record)
                self._send_json(200, {"rating_delta": None if delta is None else round(delta, 2)})
                return
            self._send_json(404, {"error": {"code": "NOT_FOUND", "message": f"no route {url.path}"}})
        except Exception as exc:  # noqa: BLE001
            self._send_error(exc)

    # -- static files ---------------------------------------------------------

    def _serve_static(self, path: str) -> None:
        assert self.static_dir is not None
        name = path.lstrip("/") or "index.html"
        target = (self.static_dir / name).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            if (self.static_dir / "index.html").is_file() and "." not in name:
                target = self.static_dir / "index.html"  # SPA fallback
            else:
                self._send_json(404, {"error": {"code": "NOT_FOUND", "message": f"no file {path}"}})
                return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class GameServer:
    """ThreadingHTTPServer plus the flush worker, with graceful shutdown."""

    def __init__(
        self,
        service: GameService,
        host: str = "127.0.0.1",
        port: int = 8000,
        static_dir: str | Path | None = None,
        quiet: bool = True,
    ) -> None:
        handler = type(
            "BoundApiHandler",
            (ApiHandler,),
            {
                "service": service,
                "static_dir": Path(static_dir) if static_dir else None,
                "quiet": quiet,
            },
        )
        self.service = service
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self.flusher = FlushWorker(service.queue, flush=service.flush)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self.httpd.server_address[1]

    def start_background(self) -> None:
        self.flusher.start()
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True, name="game-server")
        self._thread.start()

    def serve_forever(self) -> None:
        self.flusher.start()
        try:
            self.httpd.serve_forever()
        finally:
            self.shutdown()

    def shutdown(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        self.flusher.stop(drain=True)
        if self._thread is not None:
            self._thread.join(timeout=5)
