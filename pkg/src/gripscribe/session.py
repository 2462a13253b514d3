"""Live drawing session: streamed pointer targets in, pen poses out.

Wire protocol: newline-delimited JSON over a plain TCP socket.  The server
opens with {"hello": "gripscribe", "version": 1} and the client must answer
with a hello of the same version before sending frames; a mismatch refuses
the session.  Inbound frames carry the client clock:

    {"t": 1.016, "x": 0.01, "y": 0.28, "tremor_on": true,
     "set_params": {"b1": 0.2}}            (set_params optional, b1/b2 only)

Outbound frames report the simulation:

    {"t": 1.0, "pen_x": ..., "pen_y": ..., "raw_x": ..., "raw_y": ...,
     "theta1": ..., "psi2": ..., "dissipated": ...}

Time is driven by the client clock: between frames the latest pointer target
is held (zero-order hold) and the dynamics advance with fixed dt = 1e-3 s for
the whole-step part of the elapsed client time, so replaying a recorded
inbound stream through `session_step` reproduces the outbound stream
bit-exactly.  Catch-up is capped at 100 ms per tick; dropped time sets a
`lag` flag on the next outbound frame.  A browser client needs a
WebSocket-to-TCP gateway (one ships with the frontend); the core stays plain
sockets.
"""

import json
import math
import os
import socketserver
import threading
from dataclasses import replace

import numpy as np

from . import _kernel
from .config import ProjectConfig
from .dynamics import _pack_params
from .kinematics import fk
from .metrics import operating_state
from .signals import tremor_displacement

PROTOCOL_NAME = "gripscribe"
PROTOCOL_VERSION = 1

SIM_DT = 1e-3            # [s]
EMIT_EVERY = 16          # steps between outbound frames (62.5 Hz)
MAX_CATCHUP_STEPS = 100  # 100 ms per tick
TARGET_SPEED_CLAMP = 2.0  # [m/s] first-difference velocity estimate cap
VELOCITY_HOLD = 0.05     # [s] estimate lifetime past the last frame; a
                         # stale estimate would keep feeding the damper
                         # after the pointer stops


class ProtocolError(Exception):
    """Malformed inbound frame; the session survives."""


class SessionNonFinite(Exception):
    """Simulation state became non-finite; the session ends."""


def _finite_number(frame, key):
    v = frame.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ProtocolError(f"field '{key}' must be a finite number")
    return float(v)


class Session:
    """One mechanism instance driven by one inbound frame stream."""

    def __init__(self, cfg: ProjectConfig):
        self.config = cfg.mechanism
        self.params = cfg.dynamics
        self.imp = cfg.hand
        self.tremor = cfg.tremor
        state = operating_state(self.config)
        pose = fk(self.config, state)
        self._y = [state.theta1, state.psi2, 0.0, 0.0, 0.0, 0.0]
        self.sim_steps = 0           # completed fixed steps
        self._pending = 0.0          # carried sub-step time [s]
        self._client_t = None
        self._held = (pose.x, pose.y)
        self._held_vel = (0.0, 0.0)
        self._vel_expires = 0.0      # sim time [s]
        self.tremor_on = False
        self._lag_pending = False

    @property
    def sim_t(self) -> float:
        return self.sim_steps * SIM_DT

    def _target_at(self, t):
        hx, hy = self._held
        if t < self._vel_expires:
            vx, vy = self._held_vel
        else:
            vx = vy = 0.0
        if self.tremor_on:
            dp, dv = tremor_displacement(self.tremor, t)
            return hx + dp[0], hy + dp[1], vx + dv[0], vy + dv[1]
        return hx, hy, vx, vy

    def _advance(self, delta: float):
        """Integrate whole steps of elapsed client time; emit decimated
        outbound frames."""
        self._pending += delta
        n = int(self._pending / SIM_DT + 1e-9)
        if n <= 0:
            return []
        self._pending -= n * SIM_DT
        if n > MAX_CATCHUP_STEPS:
            n = MAX_CATCHUP_STEPS
            self._pending = 0.0
            self._lag_pending = True

        targets = np.empty((2 * n + 1, 4))
        t0 = self.sim_t
        for j in range(2 * n + 1):
            targets[j] = self._target_at(t0 + 0.5 * j * SIM_DT)
        p = _pack_params(self.params, self.config, self.imp)
        y0 = np.array(self._y)
        states = np.empty((n + 1, 4))
        pen = np.empty((n + 1, 2))
        energy = np.empty((n + 1, 3))
        status, done = _kernel.run_chain(p, y0, targets, SIM_DT,
                                         states, pen, energy)
        if status != 0:
            raise SessionNonFinite(
                f"simulation failed (status {status}) at t={self.sim_t:.3f}")

        out = []
        for i in range(1, n + 1):
            step = self.sim_steps + i
            if step % EMIT_EVERY == 0:
                frame = {
                    "t": step * SIM_DT,
                    "pen_x": float(pen[i, 0]), "pen_y": float(pen[i, 1]),
                    "raw_x": float(targets[2 * i, 0]),
                    "raw_y": float(targets[2 * i, 1]),
                    "theta1": float(states[i, 0]), "psi2": float(states[i, 1]),
                    "dissipated": float(energy[i, 1]),
                }
                if self._lag_pending:
                    frame["lag"] = True
                    self._lag_pending = False
                out.append(frame)
        self._y = [states[n, 0], states[n, 1], states[n, 2], states[n, 3],
                   energy[n, 0], energy[n, 1]]
        self.sim_steps += n
        return out

    @staticmethod
    def _validated_params(sp) -> dict:
        if not isinstance(sp, dict):
            raise ProtocolError("set_params must be an object")
        allowed = {"b1", "b2"}
        unknown = set(sp) - allowed
        if unknown:
            raise ProtocolError(
                f"set_params accepts only b1/b2, got {sorted(unknown)}")
        kwargs = {}
        for key in allowed & set(sp):
            v = sp[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
                raise ProtocolError(f"set_params.{key} must be a number >= 0")
            kwargs[key] = float(v)
        return kwargs

    def handle_frame(self, frame) -> list:
        """Consume one inbound frame; return outbound frames.

        All validation precedes any state change (a rejected frame leaves the
        session untouched); the interval up to the frame's timestamp runs
        under the previous settings, then the new target, tremor flag, and
        damper coefficients take effect.
        """
        if not isinstance(frame, dict):
            raise ProtocolError("frame must be a JSON object")
        t = _finite_number(frame, "t")
        x = _finite_number(frame, "x")
        y = _finite_number(frame, "y")
        tremor_on = frame.get("tremor_on", False)
        if not isinstance(tremor_on, bool):
            raise ProtocolError("field 'tremor_on' must be a boolean")
        unknown = set(frame) - {"t", "x", "y", "tremor_on", "set_params"}
        if unknown:
            raise ProtocolError(f"unknown frame fields {sorted(unknown)}")
        new_params = (self._validated_params(frame["set_params"])
                      if "set_params" in frame else None)

        out = []
        if self._client_t is None:
            self._client_t = t
        else:
            delta = max(0.0, t - self._client_t)
            out = self._advance(delta)
            if delta > 0:
                vx = (x - self._held[0]) / delta
                vy = (y - self._held[1]) / delta
                speed = math.hypot(vx, vy)
                if speed > TARGET_SPEED_CLAMP:
                    scale = TARGET_SPEED_CLAMP / speed
                    vx *= scale
                    vy *= scale
                # the estimate predicts the pointer only as far as the next
                # expected frame; past that it would push a stopped pointer
                self._held_vel = (vx, vy)
                self._vel_expires = self.sim_t + min(delta, VELOCITY_HOLD)
            self._client_t = t
        if new_params:
            self.params = replace(self.params, **new_params)
        self.tremor_on = tremor_on
        self._held = (x, y)
        return out


def session_step(session: Session, frames, wall_dt: float):
    """Advance a session by one tick.

    With inbound frames, time comes from the frame clocks; an empty batch is
    an idle tick of `wall_dt` with the last target held.  Returns
    (session, outbound frames).
    """
    out = []
    if frames:
        for frame in frames:
            out.extend(session.handle_frame(frame))
    else:
        out.extend(session._advance(wall_dt))
    return session, out


def encode_frame(frame) -> str:
    return json.dumps(frame, separators=(",", ":"), allow_nan=False)


def replay(cfg: ProjectConfig, lines) -> list:
    """Feed a recorded inbound stream (one JSON frame per line) through a
    fresh session; returns the outbound stream as encoded lines."""
    session = Session(cfg)
    out = []
    line_no = 0
    for raw in lines:
        line_no += 1          # count blanks too: line numbers must match serve
        raw = raw.strip()
        if not raw:
            continue
        try:
            frame = json.loads(raw)
        except json.JSONDecodeError:
            out.append(encode_frame({"error": "invalid JSON", "line": line_no}))
            continue
        try:
            for f in session.handle_frame(frame):
                out.append(encode_frame(f))
        except ProtocolError as exc:
            out.append(encode_frame({"error": str(exc), "line": line_no}))
        except SessionNonFinite as exc:
            out.append(encode_frame({"error": str(exc)}))
            break
    return out


class _SessionHandler(socketserver.StreamRequestHandler):
    def handle(self):
        cfg = self.server.project_config
        hello = {"hello": PROTOCOL_NAME, "version": PROTOCOL_VERSION}
        self._send(hello)
        first = self.rfile.readline()
        if not first:
            return
        refused = True
        try:
            doc = json.loads(first.decode("utf-8"))
            refused = not (isinstance(doc, dict)
                           and doc.get("version") == PROTOCOL_VERSION
                           and "hello" in doc)
        except (json.JSONDecodeError, UnicodeDecodeError):
            pass
        if refused:
            self._send({"error": "unsupported protocol version"})
            return

        record = None
        if self.server.record_dir is not None:
            name = f"session_{self.server.next_session_id():04d}.ndjson"
            record = open(os.path.join(self.server.record_dir, name), "w",
                          encoding="utf-8")
        session = Session(cfg)
        line_no = 0
        try:
            for raw in self.rfile:
                line_no += 1
                text = raw.decode("utf-8", errors="replace").strip()
                if record is not None:
                    record.write(text + "\n")
                    record.flush()
                if not text:
                    continue
                try:
                    frame = json.loads(text)
                except json.JSONDecodeError:
                    self._send({"error": "invalid JSON", "line": line_no})
                    continue
                try:
                    for f in session.handle_frame(frame):
                        self._send(f)
                except ProtocolError as exc:
                    self._send({"error": str(exc), "line": line_no})
                except SessionNonFinite as exc:
                    self._send({"error": str(exc)})
                    break
        except (ConnectionError, BrokenPipeError):
            pass
        finally:
            if record is not None:
                record.close()

    def _send(self, frame):
        try:
            self.wfile.write((encode_frame(frame) + "\n").encode("utf-8"))
            self.wfile.flush()
        except (ConnectionError, BrokenPipeError):
            pass


class SessionServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, cfg: ProjectConfig, address, record_dir=None):
        super().__init__(address, _SessionHandler)
        self.project_config = cfg
        self.record_dir = record_dir
        self._session_counter = 0
        self._counter_lock = threading.Lock()
        if record_dir is not None:
            os.makedirs(record_dir, exist_ok=True)

    def next_session_id(self) -> int:
        with self._counter_lock:
            self._session_counter += 1
            return self._session_counter


def create_server(cfg: ProjectConfig, port: int, host: str = "127.0.0.1",
                  record_dir=None) -> SessionServer:
    """Bind a session server (port 0 picks a free port)."""
    return SessionServer(cfg, (host, port), record_dir=record_dir)


def serve(cfg: ProjectConfig, port: int, host: str = "127.0.0.1",
          record_dir=None) -> None:
    """Run the session service until interrupted."""
    with create_server(cfg, port, host, record_dir) as server:
        bound = server.server_address[1]
        print(f"gripscribe session service on {host}:{bound} "
              f"(protocol v{PROTOCOL_VERSION})", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
