import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from dcatforge.probe import (
    USER_AGENT, LiveResolver, ProbeConfig, StubResolver, classify_status, parse_probe_table, probe_all, probe_one,
)


class _Handler(BaseHTTPRequestHandler):
    seen_agents: list = []

    def log_message(self, *args):
        pass

    def do_HEAD(self):
        _Handler.seen_agents.append(self.headers.get("User-Agent"))
        path = self.path
        if path == "/ok":
            self.send_response(200)
        elif path == "/no-head":
            self.send_response(501)
        elif path == "/missing":
            self.send_response(404)
        elif path == "/moved":
            self.send_response(301)
            self.send_header("Location", "/ok")
        elif path == "/loop":
            self.send_response(302)
            self.send_header("Location", "/loop")
        elif path == "/slow":
            time.sleep(1.0)
            self.send_response(200)
        else:
            self.send_response(500)
        self.send_header("Content-Length", "0")
        self.end_headers()


@pytest.fixture(scope="module")
def server():
    srv = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    srv.daemon_threads = True
    threading.Thread(target=srv.serve_forever, daemon=True).start()
    yield f"http://127.0.0.1:{srv.server_address[1]}"
    srv.shutdown()
    srv.server_close()


@pytest.mark.parametrize("code, cls", [(200, "accessible"), (302, "accessible"), (399, "accessible"),
                                       (404, "inaccessible"), (501, "inaccessible"), (None, "inaccessible"),
                                       (100, "inaccessible")])
def test_classify(code, cls):
    assert classify_status(code) == cls


def test_live_statuses(server):
    r = LiveResolver()
    assert r.head(server + "/ok", 2) == 200
    assert r.head(server + "/no-head", 2) == 501
    assert r.head(server + "/missing", 2) == 404
    assert r.head(server + "/moved", 2) == 200
    assert r.head(server + "/loop", 2) == 302
    assert USER_AGENT in _Handler.seen_agents


def test_live_timeout_and_refused(server):
    r = LiveResolver()
    assert r.head(server + "/slow", 0.2) is None
    assert r.head("http://127.0.0.1:1/", 0.5) is None
    assert r.head("ftp://example.org/", 0.5) is None


def test_probe_all_live(server):
    urls = [server + p for p in ("/ok", "/no-head", "/ok", "/moved")]
    result = probe_all(urls, ProbeConfig(timeout_ms=2000, parallelism=3))
    assert dict(result) == {server + "/ok": 200, server + "/no-head": 501, server + "/moved": 200}


class _Flaky:
    def __init__(self, answers):
        self.answers = list(answers)
        self.calls = 0

    def head(self, url, timeout):
        self.calls += 1
        return self.answers.pop(0)


def test_retry_only_on_no_response():
    flaky = _Flaky([None, 200])
    assert probe_one("u", ProbeConfig(retries=1, resolver=flaky)) == 200
    definitive = _Flaky([404, 200])
    assert probe_one("u", ProbeConfig(retries=1, resolver=definitive)) == 404
    assert definitive.calls == 1


def test_resolver_exceptions_mean_no_response():
    class Boom:
        def head(self, url, timeout):
            raise RuntimeError("boom")
    assert probe_one("u", ProbeConfig(resolver=Boom())) is None


def test_bounded_parallelism():
    lock = threading.Lock()
    state = {"now": 0, "peak": 0}

    class Counting:
        def head(self, url, timeout):
            with lock:
                state["now"] += 1
                state["peak"] = max(state["peak"], state["now"])
            time.sleep(0.01)
            with lock:
                state["now"] -= 1
            return 200

    probe_all([f"https://x.example.org/{i}" for i in range(40)], ProbeConfig(parallelism=4, resolver=Counting()))
    assert 1 <= state["peak"] <= 4


def test_probe_config_validation():
    for kw in ({"timeout_ms": 0}, {"parallelism": 0}, {"retries": -1}):
        with pytest.raises(ValueError):
            ProbeConfig(resolver=StubResolver({}), **kw)


def test_probe_table_parsing():
    table = parse_probe_table("# c\nhttps://a 200\nhttps://b none\n\n")
    assert table == {"https://a": 200, "https://b": None}
    with pytest.raises(ValueError):
        parse_probe_table("https://a ok\n")
    with pytest.raises(ValueError):
        parse_probe_table("https://a\n")
    assert StubResolver(table).head("https://unknown", 1) is None
