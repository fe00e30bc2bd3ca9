"""HTTP API over a live System.

Every mutating request becomes a timeline command at the next logical tick and
goes through the same ``System.execute`` path as scenario lines, so a console
session is recordable and replayable. The event stream is server-sent events;
reads return snapshots. Admission order under the state lock is the logical
order.
"""

from __future__ import annotations

import json
import queue
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

from . import contract as contract_mod
from .errors import (
    BindError,
    BridgeError,
    UnknownAA,
    UnknownAspect,
    UnknownComponent,
    UnknownField,
    UnknownObject,
    UnknownOperation,
    UnknownService,
    UnknownUser,
)
from .scenario import Command
from .system import System

# (method, path template) -> (subject, verb); the DSL parity table
MUTATING_ENDPOINTS: tuple[tuple[str, str, str, str], ...] = (
    ("POST", "/identify", "user", "identify"),
    ("POST", "/services/query", "user", "request"),
    ("POST", "/user/move", "user", "move"),
    ("POST", "/user/select", "user", "select"),
    ("POST", "/device/{device}/power", "device", "power"),
    ("POST", "/alarms/inject", "alarm", "inject"),
    ("POST", "/hmi/override", "user", "override"),
    ("DELETE", "/hmi/override/{field}", "user", "clear_override"),
    ("POST", "/aspects", "aspect", "weave"),
    ("DELETE", "/aspects/{id}", "aspect", "unweave"),
)

_NOT_FOUND_ERRORS = (UnknownUser, UnknownService, UnknownAspect, UnknownAA,
                     UnknownComponent, UnknownObject, UnknownOperation,
                     UnknownField)


class SystemServer:
    def __init__(self, system: System):
        self.system = system
        self.lock = threading.RLock()
        self._streams: list[queue.Queue] = []
        system.log.subscribe(self._fanout)

    def _fanout(self, event) -> None:
        for q in list(self._streams):
            q.put(event)

    def open_stream(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        self._streams.append(q)
        return q

    def close_stream(self, q: queue.Queue) -> None:
        if q in self._streams:
            self._streams.remove(q)

    def execute(self, subject: str, verb: str, instance: str | None,
                kwargs: dict[str, str]) -> dict:
        with self.lock:
            tick = self.system.clock.next()
            cmd = Command(tick, subject, verb, instance,
                          kwargs=tuple(kwargs.items()))
            result = self.system.execute(cmd)
            return {"tick": tick, **result}

    def snapshot(self) -> dict:
        with self.lock:
            return self.system.snapshot()


def _body_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


class _Handler(BaseHTTPRequestHandler):
    server_version = "ctxbridge"
    protocol_version = "HTTP/1.1"

    # set by serve()
    core: SystemServer

    def log_message(self, *args):  # quiet by default
        pass

    # --- plumbing ---------------------------------------------------------------

    def _json_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise ValueError("request body must be a JSON object") from None
        if not isinstance(body, dict):
            raise ValueError("request body must be a JSON object")
        return body

    def _send(self, status: int, payload: dict | bytes,
              content_type: str = "application/json") -> None:
        data = payload if isinstance(payload, bytes) else \
            json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _error(self, e: Exception) -> None:
        if isinstance(e, _NOT_FOUND_ERRORS):
            status = 404
        elif isinstance(e, (BridgeError, ValueError)):
            status = 400
        else:
            status = 500
        self._send(status, {"error": {"type": type(e).__name__, "detail": str(e)}})

    def _run(self, subject: str, verb: str, instance: str | None,
             kwargs: dict) -> None:
        try:
            result = self.core.execute(subject, verb, instance,
                                       {k: _body_value(v) for k, v in kwargs.items()
                                        if v is not None})
            self._send(200, result)
        except Exception as e:
            self._error(e)

    # --- routes -----------------------------------------------------------------

    def do_GET(self):
        parts = urlsplit(self.path)
        segments = [s for s in parts.path.split("/") if s]
        try:
            if parts.path == "/state":
                self._send(200, self.core.snapshot())
            elif parts.path == "/log":
                since = -1
                for piece in parts.query.split("&"):
                    if piece.startswith("since="):
                        since = int(piece[len("since="):])
                with self.core.lock:
                    events = self.core.system.log.since(since)
                self._send(200, {"events": [json.loads(e.to_line())
                                            for e in events]})
            elif parts.path == "/parity":
                self._send(200, {"endpoints": [
                    {"method": m, "path": p, "subject": s, "verb": v}
                    for m, p, s, v in MUTATING_ENDPOINTS]})
            elif parts.path == "/stream":
                self._stream(parts.query)
            elif parts.query == "wsdl" and len(segments) == 3 \
                    and segments[1] == "services":
                self._wsdl(parts.path)
            elif parts.path == "/":
                self._send(200, {"service": "ctxbridge",
                                 "endpoints": ["/state", "/log", "/stream",
                                               "/parity"]})
            else:
                self._send(404, {"error": {"type": "NotFound",
                                           "detail": parts.path}})
        except (BrokenPipeError, ConnectionResetError):
            pass
        except Exception as e:
            self._error(e)

    def _wsdl(self, path: str) -> None:
        with self.core.lock:
            match = None
            for url in self.core.system.gateway.endpoints:
                if urlsplit(url).path == path:
                    match = self.core.system.gateway.contract_document_for(url)
                    break
        if match is None:
            self._send(404, {"error": {"type": "NotFound", "detail": path}})
            return
        doc = contract_mod.render_contract(match).encode("utf-8")
        self._send(200, doc, content_type="application/xml; charset=utf-8")

    def _stream(self, query: str) -> None:
        since = -1
        for piece in query.split("&"):
            if piece.startswith("since="):
                since = int(piece[len("since="):])
        self.send_response(200)
        self.send_header("Content-Type", "text/event-stream")
        self.send_header("Cache-Control", "no-cache")
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        q = self.core.open_stream()
        last = since
        try:
            with self.core.lock:
                backlog = self.core.system.log.since(since)
            for event in backlog:
                self._write_sse(event)
                last = event.seq
            while True:
                try:
                    event = q.get(timeout=1.0)
                except queue.Empty:
                    self.wfile.write(b": keep-alive\n\n")
                    self.wfile.flush()
                    continue
                if event.seq > last:
                    self._write_sse(event)
                    last = event.seq
        except (BrokenPipeError, ConnectionResetError, OSError):
            pass
        finally:
            self.core.close_stream(q)

    def _write_sse(self, event) -> None:
        payload = event.to_line()
        self.wfile.write(f"id: {event.seq}\nevent: {event.kind}\n"
                         f"data: {payload}\n\n".encode("utf-8"))
        self.wfile.flush()

    def do_POST(self):
        parts = urlsplit(self.path)
        segments = [s for s in parts.path.split("/") if s]
        if len(segments) == 3 and segments[1] == "services":
            try:
                self._soap_call(parts.path)
            except (BrokenPipeError, ConnectionResetError):
                pass
            except Exception as e:
                self._error(e)
            return
        try:
            body = self._json_body()
        except ValueError as e:
            self._error(e)
            return
        try:
            if parts.path == "/identify":
                self._run("user", "identify", str(body.get("user_id", "")),
                          {"lon": body.get("lon"), "lat": body.get("lat")})
            elif parts.path == "/services/query":
                self._run("user", "request", str(body.get("user_id", "")),
                          {"category": body.get("category"),
                           "max_km": body.get("max_km")})
            elif parts.path == "/user/move":
                self._run("user", "move", str(body.get("user_id", "")),
                          {"lon": body.get("lon"), "lat": body.get("lat")})
            elif parts.path == "/user/select":
                self._run("user", "select", str(body.get("user_id", "")),
                          {"service": body.get("service_id")})
            elif len(segments) == 3 and segments[0] == "device" \
                    and segments[2] == "power":
                self._run("device", "power", segments[1],
                          {"on": body.get("on")})
            elif parts.path == "/alarms/inject":
                self._run("alarm", "inject", None,
                          {"source": body.get("source"),
                           "severity": body.get("severity"),
                           "text": body.get("text")})
            elif parts.path == "/hmi/override":
                user = body.get("user_id") or self._current_user()
                self._run("user", "override", str(user),
                          {"field": body.get("field"),
                           "value": body.get("value")})
            elif parts.path == "/aspects":
                advices = body.get("advices") or []
                advice = ",".join(f"{a.get('kind')}:{a.get('action')}"
                                  for a in advices)
                self._run("aspect", "weave", None,
                          {"id": body.get("id"),
                           "pointcut": body.get("pointcut"),
                           "advice": advice})
            else:
                self._send(404, {"error": {"type": "NotFound",
                                           "detail": parts.path}})
        except (BrokenPipeError, ConnectionResetError):
            pass
        except Exception as e:
            self._error(e)

    def _current_user(self) -> str:
        with self.core.lock:
            return self.core.system.current_user or ""

    def _soap_call(self, path: str) -> None:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        with self.core.lock:
            url = None
            for candidate in self.core.system.gateway.endpoints:
                if urlsplit(candidate).path == path:
                    url = candidate
                    break
            if url is None:
                self._send(404, {"error": {"type": "NotFound", "detail": path}})
                return
            response = self.core.system.gateway.handle_call_bytes(url, raw)
        self._send(200, response, content_type="application/xml; charset=utf-8")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_DELETE(self):
        parts = urlsplit(self.path)
        segments = [s for s in parts.path.split("/") if s]
        try:
            if len(segments) == 3 and segments[0] == "hmi" \
                    and segments[1] == "override":
                self._run("user", "clear_override", self._current_user(),
                          {"field": segments[2]})
            elif len(segments) == 2 and segments[0] == "aspects":
                self._run("aspect", "unweave", None, {"id": segments[1]})
            else:
                self._send(404, {"error": {"type": "NotFound",
                                           "detail": parts.path}})
        except (BrokenPipeError, ConnectionResetError):
            pass
        except Exception as e:
            self._error(e)


def make_server(system: System, port: int,
                host: str = "127.0.0.1") -> ThreadingHTTPServer:
    core = SystemServer(system)
    handler = type("BoundHandler", (_Handler,), {"core": core})
    try:
        httpd = ThreadingHTTPServer((host, port), handler)
    except OSError as e:
        raise BindError(f"cannot bind port {port}: {e}") from None
    httpd.daemon_threads = True
    return httpd


def serve(system: System, port: int, host: str = "127.0.0.1") -> None:
    httpd = make_server(system, port, host)
    try:
        httpd.serve_forever()
    finally:
        httpd.server_close()
