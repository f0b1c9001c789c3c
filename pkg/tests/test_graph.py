import random
from dataclasses import replace

import pytest

from ghostlist.generate import GenParams, generate_graph, preset
from ghostlist.graph import validate_graph
from ghostlist.graphio import graph_to_dict


SMALL = GenParams(n_users=40, mean_degree=6, n_pages=15, n_groups=5)


def test_empty_graph():
    g = generate_graph(replace(SMALL, n_users=0), 1)
    assert not g.users and not g.pages and not g.groups and not g.pictures


def test_mixed_preset_sizes():
    g = generate_graph(preset("mixed"), 42)
    assert len(g.users) == 115
    assert any(not u.privacy.is_public for u in g.users.values())


def test_public_preset_all_public():
    g = generate_graph(preset("public"), 1)
    assert len(g.users) == 1000
    assert all(u.privacy.is_public for u in g.users.values())


def test_generated_graph_valid():
    for seed in range(5):
        assert validate_graph(generate_graph(SMALL, seed)) == []


def test_determinism():
    a = generate_graph(SMALL, 7)
    b = generate_graph(SMALL, 7)
    assert graph_to_dict(a) == graph_to_dict(b)
    c = generate_graph(SMALL, 8)
    assert graph_to_dict(a) != graph_to_dict(c)


def test_invalid_params():
    with pytest.raises(ValueError):
        generate_graph(replace(SMALL, page_homophily=1.5), 1)
    with pytest.raises(ValueError):
        generate_graph(replace(SMALL, n_users=-1), 1)
    with pytest.raises(ValueError):
        generate_graph(replace(SMALL, group_visibility_weights=(0, 0, 0)), 1)
    with pytest.raises(ValueError):
        preset("bogus")


def test_private_users_friends_hidden():
    g = generate_graph(replace(SMALL, fraction_public_profiles=0.0), 3)
    assert all(not u.privacy.friends_visible for u in g.users.values())


def _mean_friend_reactor_fraction(bias: float, n_seeds: int = 20) -> float:
    fracs = []
    for seed in range(n_seeds):
        g = generate_graph(replace(SMALL, picture_friend_bias=bias), seed)
        for pic in g.pictures.values():
            reactors = pic.likers | pic.commenters
            if not reactors:
                continue
            friends = g.users[pic.owner].friends
            fracs.append(len(reactors & friends) / len(reactors))
    return sum(fracs) / len(fracs)


def test_friend_bias_monotone():
    lo = _mean_friend_reactor_fraction(0.0)
    mid = _mean_friend_reactor_fraction(0.5)
    hi = _mean_friend_reactor_fraction(1.0)
    assert lo <= mid <= hi
    assert lo == 0.0


def test_friend_bias_one_means_all_friends():
    g = generate_graph(replace(SMALL, picture_friend_bias=1.0), 11)
    for pic in g.pictures.values():
        owner = g.users[pic.owner]
        if owner.friends:
            assert (pic.likers | pic.commenters) <= owner.friends


def test_validate_flags_asymmetric_friendship():
    g = generate_graph(SMALL, 5)
    u1, u2 = sorted(g.users)[:2]
    g.users[u1].friends.add(u2)
    g.users[u2].friends.discard(u1)
    msgs = validate_graph(g)
    assert any("asymmetry" in m and str(u1) in m and str(u2) in m for m in msgs)


def test_validate_flags_fan_like_mismatch():
    g = generate_graph(SMALL, 5)
    page = next(p for p in g.pages.values() if p.fans)
    fan = next(iter(page.fans))
    g.users[fan].likes.discard(page.id)
    msgs = validate_graph(g)
    assert any("fan inconsistency" in m and str(page.id) in m for m in msgs)


def test_cover_photo_every_user():
    g = generate_graph(replace(SMALL, cover_photo_rate=1.0), 9)
    for u in g.users.values():
        assert any(g.pictures[i].is_cover for i in u.pictures)
