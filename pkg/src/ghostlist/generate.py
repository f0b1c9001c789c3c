"""Seeded synthetic social graph generator (small-world friendships, Zipf pages)."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, replace

from .graph import (Group, GroupVisibility, Page, Picture, PrivacySettings,
                    SocialGraph, User, validate_graph)

# Rewiring probability of the small-world friendship topology.
REWIRE_P = 0.1

# Mean number of groups a user joins (no dedicated knob; kept fixed).
GROUPS_PER_USER_MEAN = 1.5


@dataclass
class GenParams:
    n_users: int = 100
    mean_degree: int = 30
    n_pages: int = 40
    page_popularity_exponent: float = 1.1
    likes_per_user_mean: float = 5.0
    page_homophily: float = 0.6
    pictures_per_user_mean: float = 1.5
    cover_photo_rate: float = 1.0
    picture_friend_bias: float = 0.8
    reactions_per_picture_mean: float = 8.0
    fraction_public_profiles: float = 0.5
    n_groups: int = 12
    group_visibility_weights: tuple[float, float, float] = (0.5, 0.3, 0.2)

    def validate(self) -> None:
        for name in ("n_users", "mean_degree", "n_pages", "n_groups"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("page_homophily", "cover_photo_rate", "picture_friend_bias",
                     "fraction_public_profiles"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        for name in ("likes_per_user_mean", "pictures_per_user_mean",
                     "reactions_per_picture_mean"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.page_popularity_exponent <= 0:
            raise ValueError("page_popularity_exponent must be > 0")
        if len(self.group_visibility_weights) != 3 or any(
                w < 0 for w in self.group_visibility_weights):
            raise ValueError("group_visibility_weights must be three non-negative values")
        if sum(self.group_visibility_weights) <= 0:
            raise ValueError("group_visibility_weights must not all be zero")


def preset(name: str) -> GenParams:
    """Named parameter presets sized after the two evaluation populations."""
    base = GenParams()
    if name == "mixed":
        return replace(base, n_users=115, fraction_public_profiles=0.3)
    if name == "public":
        return replace(base, n_users=1000, fraction_public_profiles=1.0)
    raise ValueError(f"unknown preset {name!r}")


def _poisson(rng: random.Random, mean: float) -> int:
    if mean <= 0:
        return 0
    # Knuth's method; means used here are small.
    limit = math.exp(-mean)
    k, prod = 0, rng.random()
    while prod > limit:
        k += 1
        prod *= rng.random()
    return k


def _small_world_edges(rng: random.Random, n: int, mean_degree: int) -> set[tuple[int, int]]:
    """Watts-Strogatz ring lattice with rewiring; nodes are 0..n-1."""
    if n < 2:
        return set()
    k = min(mean_degree, n - 1)
    k -= k % 2
    if k < 2:
        return set()
    adj: dict[int, set[int]] = {i: set() for i in range(n)}
    for i in range(n):
        for j in range(1, k // 2 + 1):
            t = (i + j) % n
            adj[i].add(t)
            adj[t].add(i)
    for i in range(n):
        for j in range(1, k // 2 + 1):
            t = (i + j) % n
            if rng.random() >= REWIRE_P or t not in adj[i]:
                continue
            choices = [c for c in range(n) if c != i and c not in adj[i]]
            if not choices:
                continue
            new = rng.choice(choices)
            adj[i].discard(t)
            adj[t].discard(i)
            adj[i].add(new)
            adj[new].add(i)
    return {(i, j) for i in range(n) for j in adj[i] if i < j}


def generate_graph(params: GenParams, seed: int) -> SocialGraph:
    params.validate()
    rng = random.Random(seed)
    n = params.n_users
    g = SocialGraph(seed=seed)
    if n == 0:
        return g
    user_ids = list(range(1, n + 1))
    for uid in user_ids:
        g.users[uid] = User(id=uid)

    for a, b in sorted(_small_world_edges(rng, n, params.mean_degree)):
        g.users[a + 1].friends.add(b + 1)
        g.users[b + 1].friends.add(a + 1)

    page_ids = list(range(1, params.n_pages + 1))
    for pid in page_ids:
        g.pages[pid] = Page(id=pid)
    if page_ids:
        weights = [1.0 / (i ** params.page_popularity_exponent)
                   for i in range(1, len(page_ids) + 1)]
        cum = list(itertools.accumulate(weights))
        for uid in user_ids:
            user = g.users[uid]
            n_likes = _poisson(rng, params.likes_per_user_mean)
            for _ in range(n_likes):
                pid = None
                if user.friends and rng.random() < params.page_homophily:
                    liked_friends = [f for f in sorted(user.friends) if g.users[f].likes]
                    if liked_friends:
                        f = rng.choice(liked_friends)
                        pid = rng.choice(sorted(g.users[f].likes))
                if pid is None:
                    pid = rng.choices(page_ids, cum_weights=cum)[0]
                user.likes.add(pid)
                g.pages[pid].fans.add(uid)

    vis_order = (GroupVisibility.PUBLIC, GroupVisibility.PRIVATE, GroupVisibility.HIDDEN)
    group_ids = list(range(1, params.n_groups + 1))
    for gid in group_ids:
        vis = rng.choices(vis_order, weights=params.group_visibility_weights)[0]
        g.groups[gid] = Group(id=gid, visibility=vis)
    if group_ids:
        for uid in user_ids:
            n_join = min(_poisson(rng, GROUPS_PER_USER_MEAN), len(group_ids))
            for gid in rng.sample(group_ids, n_join):
                g.users[uid].groups.add(gid)
                g.groups[gid].members.add(uid)

    next_pic = 1
    for uid in user_ids:
        user = g.users[uid]
        n_pics = _poisson(rng, params.pictures_per_user_mean)
        covers = 1 if rng.random() < params.cover_photo_rate else 0
        for pic_no in range(covers + n_pics):
            pic = Picture(id=next_pic, owner=uid, is_cover=pic_no < covers)
            next_pic += 1
            friends = sorted(user.friends)
            for target in (pic.likers, pic.commenters):
                for _ in range(_poisson(rng, params.reactions_per_picture_mean)):
                    if friends and rng.random() < params.picture_friend_bias:
                        target.add(rng.choice(friends))
                    else:
                        # Uniform non-friend; the owner itself may self-react.
                        while True:
                            r = rng.randint(1, n)
                            if r not in user.friends:
                                target.add(r)
                                break
            g.pictures[pic.id] = pic
            user.pictures.append(pic.id)

    for uid in user_ids:
        if rng.random() < params.fraction_public_profiles:
            g.users[uid].privacy = PrivacySettings()
        else:
            g.users[uid].privacy = PrivacySettings(
                friends_visible=False,
                likes_visible=rng.random() < 0.5,
                pictures_visible=rng.random() < 0.5,
                groups_visible=rng.random() < 0.5,
            )

    assert not validate_graph(g)
    return g
