"""Ground-truth social world: users, pages, groups and pictures."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class GroupVisibility(str, Enum):
    PUBLIC = "public"
    PRIVATE = "private"
    HIDDEN = "hidden"


@dataclass
class PrivacySettings:
    friends_visible: bool = True
    likes_visible: bool = True
    pictures_visible: bool = True
    groups_visible: bool = True

    @property
    def is_public(self) -> bool:
        return (self.friends_visible and self.likes_visible
                and self.pictures_visible and self.groups_visible)


@dataclass
class User:
    id: int
    friends: set[int] = field(default_factory=set)
    likes: set[int] = field(default_factory=set)
    groups: set[int] = field(default_factory=set)
    pictures: list[int] = field(default_factory=list)
    privacy: PrivacySettings = field(default_factory=PrivacySettings)


@dataclass
class Page:
    id: int
    fans: set[int] = field(default_factory=set)


@dataclass
class Group:
    id: int
    members: set[int] = field(default_factory=set)
    visibility: GroupVisibility = GroupVisibility.PUBLIC


@dataclass
class Picture:
    id: int
    owner: int
    is_cover: bool = False
    likers: set[int] = field(default_factory=set)
    commenters: set[int] = field(default_factory=set)


@dataclass
class SocialGraph:
    users: dict[int, User] = field(default_factory=dict)
    pages: dict[int, Page] = field(default_factory=dict)
    groups: dict[int, Group] = field(default_factory=dict)
    pictures: dict[int, Picture] = field(default_factory=dict)
    seed: int = 0


def validate_graph(g: SocialGraph) -> list[str]:
    """Check every cross-reference invariant; returns one message per violation."""
    bad = []
    for u in g.users.values():
        if u.id in u.friends:
            bad.append(f"user {u.id} is its own friend")
        for f in u.friends:
            if f not in g.users:
                bad.append(f"user {u.id} has unknown friend {f}")
            elif u.id not in g.users[f].friends:
                bad.append(f"friendship asymmetry: {f} in friends({u.id}) "
                           f"but {u.id} not in friends({f})")
        for p in u.likes:
            if p not in g.pages:
                bad.append(f"user {u.id} likes unknown page {p}")
            elif u.id not in g.pages[p].fans:
                bad.append(f"like inconsistency: user {u.id} likes page {p} "
                           f"but is not in its fans")
        for gr in u.groups:
            if gr not in g.groups:
                bad.append(f"user {u.id} in unknown group {gr}")
            elif u.id not in g.groups[gr].members:
                bad.append(f"membership inconsistency: user {u.id} lists group {gr} "
                           f"but is not a member")
        for i in u.pictures:
            if i not in g.pictures:
                bad.append(f"user {u.id} lists unknown picture {i}")
            elif g.pictures[i].owner != u.id:
                bad.append(f"picture {i} listed by user {u.id} but owned by "
                           f"{g.pictures[i].owner}")
    for p in g.pages.values():
        for f in p.fans:
            if f not in g.users:
                bad.append(f"page {p.id} has unknown fan {f}")
            elif p.id not in g.users[f].likes:
                bad.append(f"fan inconsistency: page {p.id} lists fan {f} "
                           f"but {f} does not like it")
    for gr in g.groups.values():
        for m in gr.members:
            if m not in g.users:
                bad.append(f"group {gr.id} has unknown member {m}")
            elif gr.id not in g.users[m].groups:
                bad.append(f"membership inconsistency: group {gr.id} lists member {m} "
                           f"but {m} does not list it")
    for i in g.pictures.values():
        if i.owner not in g.users:
            bad.append(f"picture {i.id} owned by unknown user {i.owner}")
        elif i.id not in g.users[i.owner].pictures:
            bad.append(f"picture {i.id} missing from owner {i.owner}'s picture list")
        for r in i.likers | i.commenters:
            if r not in g.users:
                bad.append(f"picture {i.id} has unknown reactor {r}")
    return bad
