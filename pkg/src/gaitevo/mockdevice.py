"""A stand-in robot that speaks the serial line protocol over a local socket.

By default it runs programs on the surrogate simulator and answers ``GO``
with the simulated distance. ``replies`` overrides the answer to any command
word: a string is sent verbatim (it may be garbage), ``None`` means stay
silent so the host times out.

    with MockDevice() as dev:
        evaluate_serial(genome, SerialSettings(dev.url, timeout=1))
"""
from __future__ import annotations

import socket
import threading

from .genome import GenomeError, parse_genome, validate
from .sim import SimConfig, execute


class MockDevice:
    def __init__(self, sim: SimConfig | None = None, replies: dict | None = None):
        self.sim = sim or SimConfig()
        self.replies = dict(replies or {})
        self.received: list[str] = []
        self._program = None
        self._server = socket.create_server(("127.0.0.1", 0))
        self._server.settimeout(0.1)
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._serve, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.getsockname()[:2]
        return f"socket://{host}:{port}"

    def start(self) -> "MockDevice":
        self._thread.start()
        return self

    def stop(self):
        self._stop.set()
        self._thread.join(timeout=2)
        self._server.close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def respond(self, line: str) -> str | None:
        word, _, arg = line.partition(" ")
        if word in self.replies:
            return self.replies[word]
        if word == "PING":
            return "PONG"
        if word == "PROG":
            try:
                g = parse_genome(arg)
            except GenomeError:
                return "ERR 1"
            if not validate(g).ok:
                return "ERR 2"
            self._program = g
            return "OK"
        if word == "GO":
            if self._program is None:
                return "ERR 2"
            out = execute(self._program, self.sim)
            self._program = None
            return "FALL" if out.fell else f"DIST {out.displacement_cm:.2f}"
        return "ERR 1"

    def _serve(self):
        while not self._stop.is_set():
            try:
                conn, _ = self._server.accept()
            except (socket.timeout, OSError):
                continue
            with conn:
                conn.settimeout(0.1)
                self._handle(conn)

    def _handle(self, conn: socket.socket):
        buf = b""
        while not self._stop.is_set():
            try:
                chunk = conn.recv(4096)
            except socket.timeout:
                continue
            except OSError:
                return
            if not chunk:
                return
            buf += chunk
            while b"\n" in buf:
                raw, buf = buf.split(b"\n", 1)
                line = raw.decode("ascii", "replace").strip()
                self.received.append(line)
                reply = self.respond(line)
                if reply is not None:
                    conn.sendall(reply.encode("ascii", "replace") + b"\n")
