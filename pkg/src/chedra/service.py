"""HTTP design service: construction, classification, flexion and validation.

Sessions are immutable and content-addressed (posting the same spec twice
returns the same session id and byte-identical bodies); an LRU cap bounds the
in-memory registry.  All responses are emitted through the deterministic
serializer, so repeating any request yields identical bytes.
"""
import hashlib
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware

import numpy as np

from .errors import ChedraError, InvariantError, NotFlexibleError, SchemaError
from .nets import (
    GeneralNet,
    build_net,
    flex,
    flex_parallel,
    net_flexion_range,
    parallel_transfer,
)
from .linkage import flexion_range, interval_containing
from .serialize import dumps_canonical, geometry_document, spec_from_document, spec_to_document
from .validation import validate_state

DEFAULT_PORT = 8787
SESSION_CAP = 256


@dataclass(frozen=True)
class NetSession:
    id: str
    net: object  # ConeNet or GeneralNet
    usable_range: tuple
    planar_range: tuple
    master_id: Optional[str] = None

    def state_at(self, a: float):
        if isinstance(self.net, GeneralNet):
            return flex_parallel(self.net.master, self.net.row_scales,
                                 self.net.col_scales, a)
        return flex(self.net, a)

    @property
    def a_ref(self) -> float:
        net = self.net.master if isinstance(self.net, GeneralNet) else self.net
        return net.spec.a_ref


class SessionRegistry:
    def __init__(self, cap: int = SESSION_CAP):
        self._cap = cap
        self._lock = threading.Lock()
        self._sessions: OrderedDict = OrderedDict()

    def put(self, session: NetSession) -> None:
        with self._lock:
            self._sessions[session.id] = session
            self._sessions.move_to_end(session.id)
            while len(self._sessions) > self._cap:
                self._sessions.popitem(last=False)

    def get(self, session_id: str) -> Optional[NetSession]:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None:
                self._sessions.move_to_end(session_id)
            return session


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=dumps_canonical(payload) + "\n",
                    media_type="application/json", status_code=status_code)


def _error(status: int, detail: str, **extra) -> Response:
    return _json_response({"detail": detail, **extra}, status_code=status)


def _boundary_flag(a: float, usable: tuple) -> bool:
    lo, hi = usable
    span = max(hi - lo, 1e-30)
    return min(a - lo, hi - a) <= 1e-6 * span


def _geometry_payload(session: NetSession, a: float) -> dict:
    state = session.state_at(a)
    report = validate_state(session.net, state).to_dict()
    return geometry_document(state, report=report,
                             boundary=_boundary_flag(a, session.usable_range))


def create_app(cap: int = SESSION_CAP) -> FastAPI:
    app = FastAPI(title="chedra design service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    registry = SessionRegistry(cap)

    def make_session(net, master_id=None, extra_key: str = "") -> NetSession:
        if isinstance(net, GeneralNet):
            base = net.master
        else:
            base = net
        usable = net_flexion_range(base)
        planar = interval_containing(flexion_range(base.linkage), base.spec.a_ref)
        key = dumps_canonical(spec_to_document(base.spec)) + extra_key
        sid = hashlib.sha256(key.encode()).hexdigest()[:16]
        session = NetSession(id=sid, net=net,
                             usable_range=(float(usable[0]), float(usable[1])),
                             planar_range=(float(planar[0]), float(planar[1])),
                             master_id=master_id)
        registry.put(session)
        return session

    @app.post("/api/nets")
    async def create_net(request: Request):
        try:
            doc = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        try:
            spec = spec_from_document(doc)
        except SchemaError as exc:
            return _error(400, str(exc))
        except (InvariantError, ChedraError) as exc:
            return _error(400, str(exc))
        try:
            net = build_net(spec)
        except NotFlexibleError as exc:
            return _error(422, str(exc), residuals=exc.residuals)
        except ChedraError as exc:
            return _error(422, str(exc))
        session = make_session(net)
        cls = net.classification
        return _json_response({
            "id": session.id,
            "classification": cls.label.value,
            "branch": cls.branch,
            "case3_compatible": cls.case3_compatible,
            "range": list(session.planar_range),
            "usable_range": list(session.usable_range),
            "geometry": _geometry_payload(session, spec.a_ref),
        }, status_code=201)

    def _lookup(net_id: str):
        session = registry.get(net_id)
        if session is None:
            return None, _error(404, f"unknown net id: {net_id}")
        return session, None

    def _admit(session: NetSession, a: float):
        lo, hi = session.usable_range
        if not lo <= a <= hi:
            nearest = min(max(a, lo), hi)
            return _error(409, f"driving parameter {a} outside admissible range",
                          nearest=nearest, usable_range=[lo, hi])
        return None

    @app.get("/api/nets/{net_id}")
    async def get_net(net_id: str, a: Optional[float] = None):
        session, err = _lookup(net_id)
        if err:
            return err
        value = session.a_ref if a is None else a
        bad = _admit(session, value)
        if bad:
            return bad
        try:
            return _json_response(_geometry_payload(session, value))
        except ChedraError as exc:
            return _error(409, str(exc), nearest=session.a_ref)

    @app.get("/api/nets/{net_id}/frames")
    async def get_frames(net_id: str,
                         start: Optional[float] = Query(default=None, alias="from"),
                         to: Optional[float] = None,
                         n: int = 1):
        session, err = _lookup(net_id)
        if err:
            return err
        lo, hi = session.usable_range
        start = lo if start is None else start
        to = hi if to is None else to
        if start > to:
            return _error(400, "frame range start exceeds end")
        if n < 1:
            return _error(400, "frame count must be at least 1")
        for value in (start, to):
            bad = _admit(session, value)
            if bad:
                return bad
        values = np.linspace(start, to, n)
        try:
            frames = [_geometry_payload(session, float(v)) for v in values]
        except ChedraError as exc:
            return _error(409, str(exc), nearest=session.a_ref)
        return _json_response(frames)

    @app.post("/api/nets/{net_id}/parallel")
    async def make_parallel(net_id: str, request: Request):
        session, err = _lookup(net_id)
        if err:
            return err
        if isinstance(session.net, GeneralNet):
            return _error(400, "parallel transfer of a derived net is not supported")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body is not valid JSON")
        row_scales = body.get("row_scales")
        col_scales = body.get("col_scales")
        if not isinstance(row_scales, list) or not isinstance(col_scales, list):
            return _error(400, "row_scales and col_scales arrays are required")
        try:
            general = parallel_transfer(session.net, row_scales, col_scales)
        except ChedraError as exc:
            return _error(422, str(exc))
        scales_key = dumps_canonical({"row": row_scales, "col": col_scales})
        derived = make_session(general, master_id=session.id, extra_key=scales_key)
        return _json_response({
            "id": derived.id,
            "master": session.id,
            "range": list(derived.planar_range),
            "usable_range": list(derived.usable_range),
            "geometry": _geometry_payload(derived, derived.a_ref),
        }, status_code=201)

    @app.get("/api/nets/{net_id}/validate")
    async def validate_net(net_id: str, a: Optional[float] = None):
        session, err = _lookup(net_id)
        if err:
            return err
        value = session.a_ref if a is None else a
        bad = _admit(session, value)
        if bad:
            return bad
        try:
            state = session.state_at(value)
        except ChedraError as exc:
            return _error(409, str(exc), nearest=session.a_ref)
        return _json_response(validate_state(session.net, state).to_dict())

    return app


app = create_app()
