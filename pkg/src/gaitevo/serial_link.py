"""Host side of the line protocol spoken by a robot that measures its own walk.

ASCII lines ending in ``\\n``::

    PING                -> PONG
    PROG <genome text>  -> OK | ERR <code>     (1 parse error, 2 invalid program, 3 busy)
    GO                  -> DIST <cm> | FALL

Ports are opened with :func:`serial.serial_for_url`, so anything pyserial
understands works, including ``socket://host:port`` (used by the mock device).
"""
from __future__ import annotations

from dataclasses import dataclass

from .fitness import Evaluation
from .genome import Genome, format_genome

BAUD = 115200


class SerialLinkError(RuntimeError):
    pass


class DeviceTimeout(SerialLinkError, TimeoutError):
    pass


class ProtocolError(SerialLinkError):
    pass


class DeviceNack(SerialLinkError):
    def __init__(self, code: int):
        super().__init__(f"device rejected the program (ERR {code})")
        self.code = code


@dataclass(frozen=True)
class SerialSettings:
    port: str
    baud: int = BAUD
    timeout: float = 30.0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


def open_port(settings: SerialSettings):
    import serial

    try:
        return serial.serial_for_url(
            settings.port, baudrate=settings.baud, bytesize=8, parity="N",
            stopbits=1, timeout=settings.timeout)
    except (serial.SerialException, ValueError, OSError) as exc:
        raise SerialLinkError(f"cannot open {settings.port}: {exc}") from exc


class SerialClient:
    """Talks to one device. ``port`` is any object with pyserial's
    ``write(bytes)`` / ``readline()`` behaviour (``readline`` returns an
    incomplete line or ``b''`` when the read timeout expires)."""

    def __init__(self, port):
        self.port = port

    @classmethod
    def open(cls, settings: SerialSettings) -> "SerialClient":
        return cls(open_port(settings))

    def close(self):
        self.port.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def send(self, line: str):
        self.port.write(line.encode("ascii") + b"\n")

    def receive(self) -> str:
        raw = self.port.readline()
        if not raw.endswith(b"\n"):
            raise DeviceTimeout("no reply from device before timeout")
        try:
            return raw.decode("ascii").strip()
        except UnicodeDecodeError as exc:
            raise ProtocolError(f"non-ASCII reply {raw!r}") from exc

    def ping(self):
        self.send("PING")
        reply = self.receive()
        if reply != "PONG":
            raise ProtocolError(f"expected PONG, got {reply!r}")

    def program(self, g: Genome):
        self.send("PROG " + format_genome(g))
        reply = self.receive()
        if reply == "OK":
            return
        _raise_for_reply(reply, "OK")

    def go(self) -> Evaluation:
        self.send("GO")
        reply = self.receive()
        if reply == "FALL":
            return Evaluation(0.0, True)
        if reply.startswith("DIST "):
            try:
                value = float(reply[5:])
            except ValueError:
                raise ProtocolError(f"bad distance in {reply!r}") from None
            if value != value or abs(value) == float("inf"):
                raise ProtocolError(f"bad distance in {reply!r}")
            return Evaluation(value, False)
        _raise_for_reply(reply, "DIST or FALL")

    def evaluate(self, g: Genome) -> Evaluation:
        self.program(g)
        return self.go()

    __call__ = evaluate


def _raise_for_reply(reply: str, expected: str):
    if reply.startswith("ERR "):
        try:
            code = int(reply[4:])
        except ValueError:
            raise ProtocolError(f"bad error code in {reply!r}") from None
        raise DeviceNack(code)
    raise ProtocolError(f"expected {expected}, got {reply!r}")


def evaluate_serial(g: Genome, settings: SerialSettings) -> Evaluation:
    """One-shot evaluation: open, program, run, close."""
    with SerialClient.open(settings) as client:
        return client.evaluate(g)
