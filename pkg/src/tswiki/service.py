"""HTTP service exposing the wiki and the raw tuple space as JSON.

Endpoints:
  GET  /healthz
  GET  /page/{name}[?date=YYYY-MM-DD][&seed=...]
  GET  /browse?wikiword=&author=&rev=&date=[&seed=...]   absent field = wildcard
  POST /page/{name}        {author, date, body, base?}
  POST /vote               {tuple}
  POST /unvote             {tuple}
  POST /admin/purge        {tuple}          bearer token required
  GET  /admin/snapshot                      bearer token required

Every read draws fresh randomness from the service RNG; the optional
seed query parameter pins the draw for test reproducibility.  Mutations
go through the durable op log before they are acknowledged.  Reads run
concurrently; each mutation is one atomic log-append-plus-apply.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from random import Random
from typing import Optional
from urllib.parse import parse_qs, unquote, urlsplit

from .oplog import LOG_FILENAME, CorruptLogError, PersistentSpace
from .space import ANY, MalformedTupleError, Template, WikiTuple
from .wiki import EditRequest, WikiEngine


class WikiService:
    """Owns the durable space, the engine, the RNG, and the HTTP server."""

    def __init__(
        self,
        data_dir,
        admin_token: str,
        seed: Optional[int] = None,
        host: str = "127.0.0.1",
        port: int = 0,
        fsync: bool = True,
        ui_dir=None,
    ):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.space = PersistentSpace(self.data_dir / LOG_FILENAME, fsync=fsync)
        self.engine = WikiEngine(self.space)
        self.admin_token = admin_token
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        self._rng = Random(seed)
        self._rng_lock = threading.Lock()
        self._httpd = ThreadingHTTPServer((host, port), _Handler)
        self._httpd.daemon_threads = True
        self._httpd.app = self  # type: ignore[attr-defined]
        self._thread: Optional[threading.Thread] = None

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        host = self._httpd.server_address[0]
        return f"http://{host}:{self.port}"

    def request_rng(self, seed_param: Optional[str]) -> Random:
        """Per-request RNG: seeded from the query parameter, else the service stream."""
        if seed_param is not None:
            return Random(seed_param)
        with self._rng_lock:
            return Random(self._rng.getrandbits(64))

    def serve_forever(self) -> None:
        # Short poll interval keeps shutdown() prompt.
        self._httpd.serve_forever(poll_interval=0.05)

    def start_background(self) -> None:
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()

    def close(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
        self.space.close()


def _served_payload(served) -> dict:
    return {"tuple": served.tuple.as_list(), "matching_instances": served.matching_instances}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def app(self) -> WikiService:
        return self.server.app  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    # -- plumbing ---------------------------------------------------------

    def _send_json(self, status: int, obj) -> None:
        body = json.dumps(obj, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type, Authorization")

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise MalformedTupleError("request body must be a JSON object")
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedTupleError(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedTupleError("request body must be a JSON object")
        return obj

    def _authorized(self) -> bool:
        return self.headers.get("Authorization") == f"Bearer {self.app.admin_token}"

    def _tuple_from_body(self, obj: dict) -> WikiTuple:
        if "tuple" not in obj:
            raise MalformedTupleError("missing 'tuple' field")
        return WikiTuple.from_list(obj["tuple"])

    # -- dispatch ---------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        try:
            self._route_get()
        except MalformedTupleError as exc:
            self._send_json(400, {"error": str(exc)})
        except (CorruptLogError, OSError) as exc:
            self._send_json(503, {"error": f"storage unavailable: {exc}"})

    def do_POST(self):
        try:
            self._route_post()
        except (MalformedTupleError, ValueError) as exc:
            self._send_json(400, {"error": str(exc)})
        except (CorruptLogError, OSError) as exc:
            self._send_json(503, {"error": f"storage unavailable: {exc}"})

    def _route_get(self):
        url = urlsplit(self.path)
        params = parse_qs(url.query)
        path = url.path

        if path == "/healthz":
            self._send_json(200, {"status": "ok", "total_instances": self.app.space.total_instances})
        elif path.startswith("/page/"):
            self._get_page(unquote(path[len("/page/"):]), params)
        elif path == "/browse":
            self._get_browse(params)
        elif path == "/admin/snapshot":
            if not self._authorized():
                self._send_json(401, {"error": "admin token required"})
                return
            entries = [
                {"tuple": t.as_list(), "multiplicity": n} for t, n in self.app.space.snapshot()
            ]
            self._send_json(200, {"entries": entries, "total_instances": self.app.space.total_instances})
        elif path == "/" and self.app.ui_dir is not None:
            self.send_response(307)
            self.send_header("Location", "/ui/")
            self.send_header("Content-Length", "0")
            self.end_headers()
        elif path.startswith("/ui") and self.app.ui_dir is not None:
            self._get_static(path)
        else:
            self._send_json(404, {"error": f"no such endpoint: {path}"})

    def _param(self, params: dict, name: str) -> Optional[str]:
        values = params.get(name, [])
        # An empty form field means "leave it unconstrained".
        return values[0] if values and values[0] != "" else None

    def _get_page(self, name: str, params: dict):
        if not name:
            self._send_json(400, {"error": "page name is empty"})
            return
        rng = self.app.request_rng(self._param(params, "seed"))
        date = self._param(params, "date")
        if date is not None:
            served = self.app.engine.read_dated(name, date, rng)
            if served is None:
                self._send_json(404, {"error": f"no revision of {name} dated {date}"})
            else:
                self._send_json(200, _served_payload(served))
            return
        page = self.app.engine.read_page(name, rng)
        if page is None:
            self._send_json(404, {"error": f"page {name} does not exist"})
            return
        payload = _served_payload(page.served)
        payload["links"] = [{"name": n, "exists": e} for n, e in page.links]
        self._send_json(200, payload)

    def _get_browse(self, params: dict):
        rev_raw = self._param(params, "rev")
        if rev_raw is not None:
            try:
                rev = int(rev_raw)
            except ValueError:
                self._send_json(400, {"error": f"rev must be an integer, got {rev_raw!r}"})
                return
        else:
            rev = None
        template = Template(
            wikiword=self._param(params, "wikiword") or ANY,
            author=self._param(params, "author") or ANY,
            rev=ANY if rev is None else rev,
            date=self._param(params, "date") or ANY,
        )
        rng = self.app.request_rng(self._param(params, "seed"))
        served = self.app.engine.browse(template, rng)
        if served is None:
            self._send_json(404, {"error": "nothing matches that template"})
        else:
            self._send_json(200, _served_payload(served))

    def _get_static(self, path: str):
        rel = path[len("/ui"):].lstrip("/") or "index.html"
        target = (self.app.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.app.ui_dir)) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        body = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _route_post(self):
        url = urlsplit(self.path)
        path = url.path
        if path.startswith("/page/"):
            self._post_edit(unquote(path[len("/page/"):]))
        elif path == "/vote":
            t = self._tuple_from_body(self._read_body())
            self._send_json(200, {"multiplicity": self.app.engine.vote(t)})
        elif path == "/unvote":
            t = self._tuple_from_body(self._read_body())
            self._send_json(200, {"removed": self.app.engine.unvote(t)})
        elif path == "/admin/purge":
            if not self._authorized():
                self._send_json(401, {"error": "admin token required"})
                return
            t = self._tuple_from_body(self._read_body())
            self._send_json(200, {"removed": self.app.engine.purge(t)})
        else:
            self._send_json(404, {"error": f"no such endpoint: {path}"})

    def _post_edit(self, name: str):
        if not name:
            self._send_json(400, {"error": "page name is empty"})
            return
        obj = self._read_body()
        try:
            author, date, body = obj["author"], obj["date"], obj["body"]
        except KeyError as exc:
            self._send_json(400, {"error": f"missing field {exc}"})
            return
        base = WikiTuple.from_list(obj["base"]) if obj.get("base") is not None else None
        created = self.app.engine.edit_page(EditRequest(name, author, date, body, base))
        self._send_json(
            201,
            {
                "tuple": created.as_list(),
                "page_instances": self.app.space.count(Template(wikiword=name)),
            },
        )
