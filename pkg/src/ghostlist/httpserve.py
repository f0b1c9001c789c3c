"""HTTP wire protocol for the oracle service, plus a client with the same API.

Error mapping: NotFound -> 404, hidden result -> 403 {"hidden": true},
AccessDenied -> 403 {"denied": true}, self query -> 400, RateLimited -> 429.
"""
from __future__ import annotations

import datetime
import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import requests

from .service import (HIDDEN, AccessDeniedError, FanSample, MembersPage,
                      MutualResult, NotFoundError, OsnService, RateLimitedError,
                      ReactionSet, SelfQueryError, ServiceConfig)

_ROUTES = [
    ("likes", re.compile(r"^/user/(\d+)/likes$")),
    ("pictures", re.compile(r"^/user/(\d+)/pictures$")),
    ("groups", re.compile(r"^/user/(\d+)/groups$")),
    ("facepile", re.compile(r"^/page/(\d+)/facepile$")),
    ("mutual", re.compile(r"^/mutual/(\d+)/(\d+)$")),
    ("reactions", re.compile(r"^/picture/(\d+)/reactions$")),
    ("members", re.compile(r"^/group/(\d+)/members$")),
]


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def _send(self, status: int, body: dict) -> None:
        payload = json.dumps(body, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def do_GET(self):
        service = self.server.service
        url = urlparse(self.path)
        query = parse_qs(url.query)
        acct_raw = self.headers.get("X-Account-Id")
        if acct_raw is None or not acct_raw.lstrip("-").isdigit():
            self._send(400, {"error": "missing or bad X-Account-Id header"})
            return
        acct = int(acct_raw)
        for name, rx in _ROUTES:
            m = rx.match(url.path)
            if not m:
                continue
            try:
                self._dispatch(service, acct, name, m, query)
            except NotFoundError as exc:
                self._send(404, {"error": str(exc)})
            except SelfQueryError as exc:
                self._send(400, {"error": str(exc)})
            except AccessDeniedError:
                self._send(403, {"denied": True})
            except RateLimitedError:
                self._send(429, {"error": "rate limited"})
            return
        self._send(404, {"error": "no such endpoint"})

    def _dispatch(self, service, acct, name, m, query):
        if name == "likes":
            res = service.get_liked_pages(acct, int(m.group(1)))
            if res is HIDDEN:
                self._send(403, {"hidden": True})
            else:
                self._send(200, {"pages": sorted(res)})
        elif name == "pictures":
            res = service.get_public_pictures(acct, int(m.group(1)))
            self._send(200, {"pictures": sorted(res)})
        elif name == "groups":
            res = service.get_groups(acct, int(m.group(1)))
            if res is HIDDEN:
                self._send(403, {"hidden": True})
            else:
                self._send(200, {"groups": sorted(res)})
        elif name == "facepile":
            seed = int(query.get("seed", ["0"])[0])
            res = service.facepile(acct, int(m.group(1)), seed)
            self._send(200, {"fans": sorted(res.sampled_fans),
                             "total": res.total_fan_count})
        elif name == "mutual":
            res = service.mutual_content(acct, int(m.group(1)), int(m.group(2)))
            body = {"are_friends": res.are_friends,
                    "mutual_friends": sorted(res.mutual_friends)}
            if res.friends_since is not None:
                body["since"] = res.friends_since.isoformat()
            self._send(200, body)
        elif name == "reactions":
            res = service.get_picture_reactions(acct, int(m.group(1)))
            self._send(200, {"likers": sorted(res.likers),
                             "commenters": sorted(res.commenters)})
        elif name == "members":
            page = int(query.get("page", ["0"])[0])
            res = service.get_group_members(acct, int(m.group(1)), page)
            self._send(200, {"members": sorted(res.members), "total": res.total,
                             "has_more": res.has_more})


class ServerHandle:
    def __init__(self, server: ThreadingHTTPServer, thread: threading.Thread):
        self._server = server
        self._thread = thread
        self.port = server.server_address[1]
        self.url = f"http://127.0.0.1:{self.port}"

    def stop(self) -> None:
        self._server.shutdown()
        self._thread.join()
        self._server.server_close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.stop()


def spawn_http_server(graph_or_service, config: ServiceConfig | None = None,
                      port: int = 0) -> ServerHandle:
    service = (graph_or_service if isinstance(graph_or_service, OsnService)
               else OsnService(graph_or_service, config))
    server = ThreadingHTTPServer(("127.0.0.1", port), _Handler)
    server.daemon_threads = True
    server.service = service
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return ServerHandle(server, thread)


class HttpServiceBackend:
    """requests-based client exposing the same account-aware API as OsnService."""

    def __init__(self, base_url: str, latency: float = 0.5):
        self.base_url = base_url.rstrip("/")
        self.config = ServiceConfig(latency=latency)
        self._local = threading.local()

    def _session(self) -> requests.Session:
        if not hasattr(self._local, "session"):
            self._local.session = requests.Session()
        return self._local.session

    def _get(self, account_id: int, path: str, params=None) -> dict:
        resp = self._session().get(self.base_url + path, params=params,
                                   headers={"X-Account-Id": str(account_id)})
        if resp.status_code == 200:
            return resp.json()
        body = resp.json()
        if resp.status_code == 403 and body.get("hidden"):
            return HIDDEN
        if resp.status_code == 403 and body.get("denied"):
            raise AccessDeniedError(body.get("error", "denied"))
        if resp.status_code == 404:
            raise NotFoundError("entity", -1)
        if resp.status_code == 429:
            raise RateLimitedError("rate limited")
        if resp.status_code == 400:
            raise SelfQueryError(body.get("error", "bad request"))
        resp.raise_for_status()

    def get_liked_pages(self, account_id, v):
        body = self._get(account_id, f"/user/{v}/likes")
        return body if body is HIDDEN else set(body["pages"])

    def facepile(self, account_id, p, call_seed):
        body = self._get(account_id, f"/page/{p}/facepile", {"seed": call_seed})
        return FanSample(page=p, sampled_fans=set(body["fans"]),
                         total_fan_count=body["total"])

    def mutual_content(self, account_id, a, b):
        body = self._get(account_id, f"/mutual/{a}/{b}")
        since = (datetime.date.fromisoformat(body["since"])
                 if "since" in body else None)
        return MutualResult(are_friends=body["are_friends"], friends_since=since,
                            mutual_friends=set(body["mutual_friends"]))

    def get_public_pictures(self, account_id, v):
        return set(self._get(account_id, f"/user/{v}/pictures")["pictures"])

    def get_picture_reactions(self, account_id, i):
        body = self._get(account_id, f"/picture/{i}/reactions")
        return ReactionSet(picture=i, likers=set(body["likers"]),
                           commenters=set(body["commenters"]))

    def get_groups(self, account_id, v):
        body = self._get(account_id, f"/user/{v}/groups")
        return body if body is HIDDEN else set(body["groups"])

    def get_group_members(self, account_id, g, page_index):
        body = self._get(account_id, f"/group/{g}/members", {"page": page_index})
        return MembersPage(members=set(body["members"]), total=body["total"],
                           has_more=body["has_more"])
