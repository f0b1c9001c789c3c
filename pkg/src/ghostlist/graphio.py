"""Strict JSON persistence for social graphs."""
from __future__ import annotations

import json
from pathlib import Path

from .graph import (Group, GroupVisibility, Page, Picture, PrivacySettings,
                    SocialGraph, User)

_TOP_KEYS = {"users", "pages", "groups", "pictures", "seed"}
_USER_KEYS = {"id", "friends", "likes", "groups", "pictures", "privacy"}
_PRIVACY_KEYS = {"friends_visible", "likes_visible", "pictures_visible", "groups_visible"}
_PAGE_KEYS = {"id", "fans"}
_GROUP_KEYS = {"id", "members", "visibility"}
_PICTURE_KEYS = {"id", "owner", "is_cover", "likers", "commenters"}


class GraphFormatError(ValueError):
    """Raised when a graph document does not match the expected schema."""


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise GraphFormatError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise GraphFormatError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = allowed - set(obj)
    if missing:
        raise GraphFormatError(f"{where}: missing key(s) {sorted(missing)}")


def _ids(value, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
        raise GraphFormatError(f"{where}: expected an array of integers")
    return value


def graph_to_dict(g: SocialGraph) -> dict:
    return {
        "seed": g.seed,
        "users": [
            {
                "id": u.id,
                "friends": sorted(u.friends),
                "likes": sorted(u.likes),
                "groups": sorted(u.groups),
                "pictures": list(u.pictures),
                "privacy": {
                    "friends_visible": u.privacy.friends_visible,
                    "likes_visible": u.privacy.likes_visible,
                    "pictures_visible": u.privacy.pictures_visible,
                    "groups_visible": u.privacy.groups_visible,
                },
            }
            for u in sorted(g.users.values(), key=lambda u: u.id)
        ],
        "pages": [
            {"id": p.id, "fans": sorted(p.fans)}
            for p in sorted(g.pages.values(), key=lambda p: p.id)
        ],
        "groups": [
            {"id": gr.id, "members": sorted(gr.members), "visibility": gr.visibility.value}
            for gr in sorted(g.groups.values(), key=lambda gr: gr.id)
        ],
        "pictures": [
            {"id": i.id, "owner": i.owner, "is_cover": i.is_cover,
             "likers": sorted(i.likers), "commenters": sorted(i.commenters)}
            for i in sorted(g.pictures.values(), key=lambda i: i.id)
        ],
    }


def graph_from_dict(doc: dict) -> SocialGraph:
    _check_keys(doc, _TOP_KEYS, "top level")
    if not isinstance(doc["seed"], int):
        raise GraphFormatError("seed: expected an integer")
    g = SocialGraph(seed=doc["seed"])
    for n, rec in enumerate(doc["users"]):
        where = f"users[{n}]"
        _check_keys(rec, _USER_KEYS, where)
        _check_keys(rec["privacy"], _PRIVACY_KEYS, f"{where}.privacy")
        u = User(
            id=rec["id"],
            friends=set(_ids(rec["friends"], f"{where}.friends")),
            likes=set(_ids(rec["likes"], f"{where}.likes")),
            groups=set(_ids(rec["groups"], f"{where}.groups")),
            pictures=_ids(rec["pictures"], f"{where}.pictures"),
            privacy=PrivacySettings(**rec["privacy"]),
        )
        if u.id in g.users:
            raise GraphFormatError(f"{where}: duplicate user id {u.id}")
        g.users[u.id] = u
    for n, rec in enumerate(doc["pages"]):
        where = f"pages[{n}]"
        _check_keys(rec, _PAGE_KEYS, where)
        if rec["id"] in g.pages:
            raise GraphFormatError(f"{where}: duplicate page id {rec['id']}")
        g.pages[rec["id"]] = Page(id=rec["id"], fans=set(_ids(rec["fans"], f"{where}.fans")))
    for n, rec in enumerate(doc["groups"]):
        where = f"groups[{n}]"
        _check_keys(rec, _GROUP_KEYS, where)
        try:
            vis = GroupVisibility(rec["visibility"])
        except ValueError:
            raise GraphFormatError(f"{where}: bad visibility {rec['visibility']!r}") from None
        if rec["id"] in g.groups:
            raise GraphFormatError(f"{where}: duplicate group id {rec['id']}")
        g.groups[rec["id"]] = Group(id=rec["id"], visibility=vis,
                                    members=set(_ids(rec["members"], f"{where}.members")))
    for n, rec in enumerate(doc["pictures"]):
        where = f"pictures[{n}]"
        _check_keys(rec, _PICTURE_KEYS, where)
        if rec["id"] in g.pictures:
            raise GraphFormatError(f"{where}: duplicate picture id {rec['id']}")
        g.pictures[rec["id"]] = Picture(
            id=rec["id"], owner=rec["owner"], is_cover=bool(rec["is_cover"]),
            likers=set(_ids(rec["likers"], f"{where}.likers")),
            commenters=set(_ids(rec["commenters"], f"{where}.commenters")))
    return g


def save_graph(g: SocialGraph, path) -> None:
    Path(path).write_text(
        json.dumps(graph_to_dict(g), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_graph(path) -> SocialGraph:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    return graph_from_dict(doc)
