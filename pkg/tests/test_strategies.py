import random
from dataclasses import replace

import pytest

from ghostlist.generate import GenParams, generate_graph
from ghostlist.service import (NotFoundError, OsnService, RoundRobinOracle,
                               ServiceConfig)
from ghostlist.strategies import (BUDGET_REACHED, EXHAUSTED, NOTHING_ACCESSIBLE,
                                  STRATEGIES, StrategyConfig,
                                  reachable_friends_upper_bound, run_strategy,
                                  s1_likes_random, s2_likes_ascending,
                                  s3_likes_descending, s4_pictures, true_friends)
from ghostlist.worlds import world_w1, world_w2, world_w3


def oracle_for(graph, **cfg):
    return RoundRobinOracle(OsnService(graph, ServiceConfig(**cfg)), 9)


CFG = StrategyConfig(run_seed=7)


# -- hand-enumerated fixture runs ------------------------------------------

def test_s1_w1_exact():
    t = s1_likes_random(1, oracle_for(world_w1()), CFG)
    assert t.friends_found == {2, 3}
    assert t.requests == 8
    assert t.terminated_reason == EXHAUSTED


def test_s4_w2_exact():
    t = s4_pictures(1, oracle_for(world_w2()), CFG)
    assert t.friends_found == {2, 3}
    assert t.requests == 5


def test_group_ascending_w3_exact():
    t = run_strategy("gasc", 1, oracle_for(world_w3()), CFG)
    assert t.friends_found == {2}
    assert t.requests == 5
    assert any(ev.data.get("denied") for ev in t.events)


def test_s2_w1_small_page_first():
    t = s2_likes_ascending(1, oracle_for(world_w1()), CFG)
    firsts = [ev.data["candidate"] for ev in t.events if ev.kind == "mutual"]
    # page 1 (3 fans) before page 2 (4 fans): candidates 2,4 then 3,5,6
    assert firsts == [2, 4, 3, 5, 6]
    assert t.friends_found == {2, 3}


def test_s3_w1_big_page_first():
    t = s3_likes_descending(1, oracle_for(world_w1()), CFG)
    firsts = [ev.data["candidate"] for ev in t.events if ev.kind == "mutual"]
    assert firsts == [3, 5, 6, 2, 4]


def test_s2_budget_three():
    t = s2_likes_ascending(1, oracle_for(world_w1()), replace(CFG, budget=3))
    assert t.requests == 3 and t.friends_found == set()
    assert t.terminated_reason == BUDGET_REACHED


def test_budget_zero():
    t = s1_likes_random(1, oracle_for(world_w1()), replace(CFG, budget=0))
    assert t.requests == 0 and t.terminated_reason == BUDGET_REACHED


def test_hidden_likes():
    g = world_w1()
    g.users[1].privacy.likes_visible = False
    t = s1_likes_random(1, oracle_for(g), CFG)
    assert t.requests == 1 and t.friends_found == set()
    assert t.terminated_reason == NOTHING_ACCESSIBLE


def test_empty_likes_visible():
    g = world_w1()
    for p in g.pages.values():
        p.fans.discard(1)
    g.users[1].likes.clear()
    t = s1_likes_random(1, oracle_for(g), CFG)
    assert t.requests == 1 and t.terminated_reason == EXHAUSTED


def test_s4_no_pictures():
    t = s4_pictures(2, oracle_for(world_w2()), CFG)
    assert t.requests == 1 and t.friends_found == set()


def test_s4_self_like_excluded():
    g = world_w2()
    g.pictures[1].likers = {1}
    g.pictures[1].commenters = set()
    t = s4_pictures(1, oracle_for(g), CFG)
    assert t.requests == 2 and t.friends_found == set()


def test_groups_hidden_flag():
    g = world_w3()
    g.users[1].privacy.groups_visible = False
    t = run_strategy("gasc", 1, oracle_for(g), CFG)
    assert t.requests == 1 and t.terminated_reason == NOTHING_ACCESSIBLE


def test_hidden_group_unlisted():
    from ghostlist.graph import GroupVisibility
    g = world_w3()
    g.groups[1].visibility = GroupVisibility.HIDDEN
    g.groups[2].visibility = GroupVisibility.HIDDEN
    t = run_strategy("gasc", 1, oracle_for(g), CFG)
    assert t.requests == 1 and t.friends_found == set()


def test_unknown_victim():
    with pytest.raises(NotFoundError):
        s1_likes_random(999, oracle_for(world_w1()), CFG)


# -- ground-truth oracles ---------------------------------------------------

def test_true_friends():
    assert true_friends(1, world_w1()) == {2, 3}
    assert true_friends(4, world_w1()) == set()


def test_upper_bounds_on_fixtures():
    assert reachable_friends_upper_bound(1, world_w1(), "s1") == {2, 3}
    assert reachable_friends_upper_bound(1, world_w2(), "s4") == {2, 3}
    assert reachable_friends_upper_bound(1, world_w3(), "gasc") == {2}


def test_upper_bound_no_shared_pages():
    g = world_w1()
    for p in g.pages.values():
        p.fans -= {2, 3}
    g.users[2].likes.clear()
    g.users[3].likes.clear()
    assert reachable_friends_upper_bound(1, g, "s2") == set()


# -- properties over random graphs -----------------------------------------

PARAMS = GenParams(n_users=60, mean_degree=8, n_pages=12, n_groups=6,
                   fraction_public_profiles=0.4)


def test_soundness_random():
    rng = random.Random(0)
    for trial in range(10):
        g = generate_graph(PARAMS, trial)
        oracle = oracle_for(g, sample_size=rng.randint(2, 40))
        victim = rng.choice(sorted(g.users))
        budget = rng.choice([None, 0, 5, 25])
        for name in STRATEGIES:
            t = run_strategy(name, victim, oracle,
                             StrategyConfig(budget=budget, run_seed=trial))
            assert t.friends_found <= true_friends(victim, g)


def test_limit_completeness_and_s123_equivalence():
    for seed in range(5):
        g = generate_graph(PARAMS, 100 + seed)
        max_fans = max((len(p.fans) for p in g.pages.values()), default=1)
        victim = sorted(g.users)[seed]
        found = {}
        for name in STRATEGIES:
            oracle = oracle_for(g, sample_size=max_fans)
            t = run_strategy(name, victim, oracle, StrategyConfig(run_seed=seed))
            assert t.friends_found == reachable_friends_upper_bound(victim, g, name)
            found[name] = t.friends_found
        assert found["s1"] == found["s2"] == found["s3"]


def test_single_verification_per_candidate():
    g = generate_graph(PARAMS, 3)
    victim = sorted(g.users)[0]
    t = s2_likes_ascending(victim, oracle_for(g), StrategyConfig(run_seed=1))
    checked = [ev.data["candidate"] for ev in t.events if ev.kind == "mutual"]
    assert len(checked) == len(set(checked))


def test_monotone_found_counts():
    g = generate_graph(PARAMS, 4)
    t = s4_pictures(sorted(g.users)[1], oracle_for(g), StrategyConfig(run_seed=2))
    counts = t.found_by_request()
    assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_trace_determinism():
    g = generate_graph(PARAMS, 6)
    victim = sorted(g.users)[2]
    runs = [run_strategy("s1", victim, oracle_for(g), StrategyConfig(run_seed=9))
            for _ in range(2)]
    assert runs[0] == runs[1]


def test_budget_compliance():
    g = generate_graph(PARAMS, 8)
    victim = sorted(g.users)[0]
    unlimited = s2_likes_ascending(victim, oracle_for(g), StrategyConfig(run_seed=3))
    for budget in range(0, unlimited.requests + 2):
        t = s2_likes_ascending(victim, oracle_for(g),
                               StrategyConfig(budget=budget, run_seed=3))
        assert t.requests <= budget
        expect_hit = budget < unlimited.requests
        assert (t.terminated_reason == BUDGET_REACHED) == expect_hit


def test_expand_mutuals_superset():
    g = generate_graph(PARAMS, 12)
    victim = sorted(g.users)[3]
    plain = s2_likes_ascending(victim, oracle_for(g, sample_size=5),
                               StrategyConfig(run_seed=4))
    expanded = s2_likes_ascending(victim, oracle_for(g, sample_size=5),
                                  StrategyConfig(run_seed=4, expand_mutuals=True))
    assert expanded.friends_found >= plain.friends_found
    assert expanded.friends_found <= true_friends(victim, g)


def test_rate_limited_retry_counts_requests():
    svc = OsnService(world_w1(), ServiceConfig(rate_limit=1.0, rate_limit_burst=2))
    oracle = RoundRobinOracle(svc, 1)
    t = s1_likes_random(1, oracle, CFG)
    # Same discoveries as the unlimited run, at a higher request cost.
    assert t.friends_found == {2, 3}
    assert t.requests > 8
    assert t.requests == len(svc.ledger)
    assert any(ev.data.get("rate_limited") for ev in t.events)
