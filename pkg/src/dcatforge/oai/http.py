"""HTTP front end: GET and POST on ``/oai``."""

from __future__ import annotations

import threading
from dataclasses import replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from ..clock import Clock, system_clock
from .server import OaiConfig, Repository, handle_request

OAI_PATH = "/oai"


class OaiHTTPServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, repo: Repository, cfg: OaiConfig, clock: Clock = system_clock):
        super().__init__(address, _Handler)
        self.repo = repo
        self.cfg = cfg
        self.clock = clock

    @property
    def url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}{OAI_PATH}"


class _Handler(BaseHTTPRequestHandler):
    server: OaiHTTPServer
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # keep test output quiet
        pass

    def _answer(self, query: str) -> None:
        params = parse_qs(query, keep_blank_values=True)
        resp = handle_request(self.server.repo, params, self.server.cfg, self.server.clock)
        body = resp.body
        self.send_response(resp.status)
        self.send_header("Content-Type", resp.content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _not_found(self) -> None:
        self.send_response(404)
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        parts = urlsplit(self.path)
        if parts.path != OAI_PATH:
            return self._not_found()
        self._answer(parts.query)

    def do_POST(self):
        if urlsplit(self.path).path != OAI_PATH:
            return self._not_found()
        length = int(self.headers.get("Content-Length") or 0)
        self._answer(self.rfile.read(length).decode("utf-8", errors="replace"))


def make_server(
    repo: Repository, cfg: OaiConfig | None = None, host: str = "127.0.0.1", port: int = 0,
    clock: Clock = system_clock, public_url: str | None = None,
) -> OaiHTTPServer:
    """Bind (port 0 picks a free port). Identify advertises ``public_url`` or the bound address."""
    cfg = cfg or OaiConfig()
    server = OaiHTTPServer((host, port), repo, cfg, clock)
    server.cfg = replace(cfg, base_url=public_url or server.url)
    return server


def serve_in_thread(server: OaiHTTPServer) -> threading.Thread:
    t = threading.Thread(target=server.serve_forever, daemon=True)
    t.start()
    return t
