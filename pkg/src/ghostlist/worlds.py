"""Small hand-built worlds with request counts worked out by hand in the tests."""
from __future__ import annotations

from .graph import (Group, GroupVisibility, Page, Picture, PrivacySettings,
                    SocialGraph, User, validate_graph)


def _user(uid, friends=(), likes=(), groups=(), pictures=(), **privacy):
    return User(id=uid, friends=set(friends), likes=set(likes), groups=set(groups),
                pictures=list(pictures), privacy=PrivacySettings(**privacy))


def world_w1() -> SocialGraph:
    """Victim 1 with hidden friends {2, 3}, public likes {pA=1, pB=2}."""
    g = SocialGraph(seed=1)
    g.users = {
        1: _user(1, friends={2, 3}, likes={1, 2}, friends_visible=False),
        2: _user(2, friends={1}, likes={1}),
        3: _user(3, friends={1}, likes={2}),
        4: _user(4, likes={1}),
        5: _user(5, likes={2}),
        6: _user(6, likes={2}),
    }
    g.pages = {
        1: Page(id=1, fans={1, 2, 4}),
        2: Page(id=2, fans={1, 3, 5, 6}),
    }
    assert not validate_graph(g)
    return g


def world_w2() -> SocialGraph:
    """Victim 1 with hidden pictures but one cover photo that leaks reactions."""
    g = SocialGraph(seed=2)
    g.users = {
        1: _user(1, friends={2, 3}, pictures=[1],
                 friends_visible=False, pictures_visible=False),
        2: _user(2, friends={1}),
        3: _user(3, friends={1}),
        4: _user(4),
    }
    g.pictures = {
        1: Picture(id=1, owner=1, is_cover=True, likers={2, 4}, commenters={3}),
    }
    assert not validate_graph(g)
    return g


def world_w3() -> SocialGraph:
    """Victim 1 in one public group (with friend 2) and one private group."""
    g = SocialGraph(seed=3)
    g.users = {
        1: _user(1, friends={2}, groups={1, 2}, friends_visible=False),
        2: _user(2, friends={1}, groups={1}),
        5: _user(5, groups={2}),
        7: _user(7, groups={1}),
    }
    g.groups = {
        1: Group(id=1, members={1, 2, 7}, visibility=GroupVisibility.PUBLIC),
        2: Group(id=2, members={1, 5}, visibility=GroupVisibility.PRIVATE),
    }
    assert not validate_graph(g)
    return g
