import random

import pytest
import requests

from ghostlist.generate import GenParams, generate_graph
from ghostlist.httpserve import HttpServiceBackend, spawn_http_server
from ghostlist.service import (HIDDEN, AccessDeniedError, NotFoundError,
                               OsnService, SelfQueryError, ServiceConfig)
from ghostlist.worlds import world_w1, world_w2, world_w3


@pytest.fixture(scope="module")
def w1_server():
    with spawn_http_server(world_w1()) as handle:
        yield handle


def _get(handle, path, acct="1", **params):
    headers = {"X-Account-Id": acct} if acct is not None else {}
    return requests.get(handle.url + path, headers=headers, params=params)


def test_mutual_endpoint(w1_server):
    r = _get(w1_server, "/mutual/1/2")
    assert r.status_code == 200
    body = r.json()
    assert body["are_friends"] is True and "since" in body


def test_hidden_maps_to_403(w1_server):
    g = world_w1()
    g.users[1].privacy.likes_visible = False
    with spawn_http_server(g) as handle:
        r = _get(handle, "/user/1/likes")
        assert r.status_code == 403 and r.json() == {"hidden": True}


def test_denied_maps_to_403():
    with spawn_http_server(world_w3()) as handle:
        r = _get(handle, "/group/2/members")
        assert r.status_code == 403 and r.json()["denied"] is True


def test_unknown_page_404(w1_server):
    assert _get(w1_server, "/page/999999/facepile").status_code == 404


def test_unknown_route_404(w1_server):
    assert _get(w1_server, "/nope").status_code == 404


def test_self_query_400(w1_server):
    assert _get(w1_server, "/mutual/1/1").status_code == 400


def test_missing_account_header_400(w1_server):
    assert _get(w1_server, "/user/1/likes", acct=None).status_code == 400


def test_arrays_sorted(w1_server):
    body = _get(w1_server, "/page/2/facepile", seed=3).json()
    assert body["fans"] == sorted(body["fans"])
    assert body["total"] == 4


def test_server_side_ledger(w1_server):
    service = w1_server._server.service
    before = len(service.ledger)
    _get(w1_server, "/user/1/likes", acct="5")
    assert len(service.ledger) == before + 1
    assert service.ledger[-1].account_id == 5


def _call(backend, kind, args):
    fn = {
        "likes": backend.get_liked_pages,
        "facepile": backend.facepile,
        "mutual": backend.mutual_content,
        "pictures": backend.get_public_pictures,
        "reactions": backend.get_picture_reactions,
        "groups": backend.get_groups,
        "members": backend.get_group_members,
    }[kind]
    try:
        return ("ok", fn(0, *args))
    except NotFoundError:
        return ("not_found",)
    except SelfQueryError:
        return ("self_query",)
    except AccessDeniedError:
        return ("denied",)


def _normalize(outcome):
    if outcome[0] != "ok":
        return outcome
    value = outcome[1]
    if value is HIDDEN:
        return ("hidden",)
    if isinstance(value, (set, frozenset)):
        return ("ok", sorted(value))
    return ("ok", value)


def test_transport_equivalence_matrix():
    """Randomized call matrix: HTTP and in-process decode to identical results."""
    g = generate_graph(GenParams(n_users=50, mean_degree=6, n_pages=10,
                                 n_groups=5, fraction_public_profiles=0.4), 17)
    config = ServiceConfig(sample_size=8)
    local = OsnService(g, config)
    rng = random.Random(5)
    users = sorted(g.users) + [9999]
    pages = sorted(g.pages) + [9999]
    pics = sorted(g.pictures)[:30] + [9999]
    groups = sorted(g.groups) + [9999]
    with spawn_http_server(g, config) as handle:
        remote = HttpServiceBackend(handle.url)
        for _ in range(200):
            kind = rng.choice(["likes", "facepile", "mutual", "pictures",
                               "reactions", "groups", "members"])
            args = {
                "likes": lambda: (rng.choice(users),),
                "pictures": lambda: (rng.choice(users),),
                "groups": lambda: (rng.choice(users),),
                "facepile": lambda: (rng.choice(pages), rng.randrange(100)),
                "mutual": lambda: (rng.choice(users), rng.choice(users)),
                "reactions": lambda: (rng.choice(pics),),
                "members": lambda: (rng.choice(groups), rng.randrange(3)),
            }[kind]()
            a = _normalize(_call(local, kind, args))
            b = _normalize(_call(remote, kind, args))
            if a[0] == "ok" and hasattr(a[1], "sampled_fans"):
                a = ("ok", sorted(a[1].sampled_fans), a[1].total_fan_count)
                b = ("ok", sorted(b[1].sampled_fans), b[1].total_fan_count)
            elif a[0] == "ok" and hasattr(a[1], "are_friends"):
                a = ("ok", a[1].are_friends, a[1].friends_since,
                     sorted(a[1].mutual_friends))
                b = ("ok", b[1].are_friends, b[1].friends_since,
                     sorted(b[1].mutual_friends))
            elif a[0] == "ok" and hasattr(a[1], "likers"):
                a = ("ok", sorted(a[1].likers), sorted(a[1].commenters))
                b = ("ok", sorted(b[1].likers), sorted(b[1].commenters))
            elif a[0] == "ok" and hasattr(a[1], "members"):
                a = ("ok", sorted(a[1].members), a[1].total, a[1].has_more)
                b = ("ok", sorted(b[1].members), b[1].total, b[1].has_more)
            assert a == b, (kind, args)
