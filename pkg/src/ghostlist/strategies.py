"""Friend-recovery strategies against the oracle interface.

Each strategy harvests candidate ids from one public surface (page fans,
picture reactions or group members) and confirms every candidate once through
the mutual-content endpoint, so the result can never contain a false positive.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .graph import GroupVisibility, SocialGraph
from .service import (HIDDEN, AccessDeniedError, NotFoundError,
                      RateLimitedError, derive_seed)

EXHAUSTED = "Exhausted"
BUDGET_REACHED = "BudgetReached"
NOTHING_ACCESSIBLE = "NothingAccessible"

# Safety valve for a rate limit so tight it can never recover.
MAX_RATE_LIMIT_RETRIES = 1000


@dataclass
class StrategyConfig:
    budget: int | None = None
    expand_mutuals: bool = False
    facepile_calls_per_page: int = 1
    run_seed: int = 0

    def validate(self) -> None:
        if self.budget is not None and self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.facepile_calls_per_page < 1:
            raise ValueError("facepile_calls_per_page must be >= 1")


@dataclass
class TraceEvent:
    no: int
    t: float
    kind: str
    data: dict


@dataclass
class CrawlTrace:
    victim: int
    strategy_name: str
    events: list[TraceEvent] = field(default_factory=list)
    friends_found: set[int] = field(default_factory=set)
    terminated_reason: str = EXHAUSTED

    @property
    def requests(self) -> int:
        return len(self.events)

    def found_by_request(self) -> list[int]:
        """Cumulative friends-found count indexed by request number (index 0 = 0)."""
        counts = [0]
        running = 0
        for ev in self.events:
            if ev.kind == "mutual" and ev.data.get("friend"):
                running += 1
            counts.append(running)
        return counts


class _BudgetHit(Exception):
    pass


class _Run:
    """Shared per-run plumbing: budget gate, event log, verification."""

    def __init__(self, victim: int, oracle, cfg: StrategyConfig, name: str):
        cfg.validate()
        self.victim = victim
        self.oracle = oracle
        self.cfg = cfg
        self.latency = getattr(oracle, "latency", 0.5)
        self.trace = CrawlTrace(victim=victim, strategy_name=name)
        self.verified: set[int] = set()

    def call(self, kind: str, fn, *args, summary=None):
        retries = 0
        while True:
            budget = self.cfg.budget
            if budget is not None and self.trace.requests >= budget:
                raise _BudgetHit
            try:
                result = fn(*args)
            except RateLimitedError:
                self._log(kind, {"rate_limited": True})
                retries += 1
                if retries > MAX_RATE_LIMIT_RETRIES:
                    raise RuntimeError("rate limit never recovered") from None
                continue
            except AccessDeniedError:
                self._log(kind, {"denied": True, "args": list(args)})
                return None
            self._log(kind, summary(result) if summary else {})
            return result

    def _log(self, kind: str, data: dict) -> None:
        no = self.trace.requests + 1
        self.trace.events.append(TraceEvent(no=no, t=no * self.latency,
                                            kind=kind, data=data))

    def verify(self, candidate: int) -> object | None:
        """Check one candidate through mutual content; returns the result."""
        if candidate == self.victim or candidate in self.verified:
            return None
        self.verified.add(candidate)
        res = self.call("mutual", self.oracle.mutual, candidate, self.victim,
                        summary=lambda r: {"candidate": candidate,
                                           "friend": r.are_friends})
        if res.are_friends:
            self.trace.friends_found.add(candidate)
        return res

    def verify_batch(self, candidates) -> None:
        queue = deque(sorted(set(candidates) - {self.victim} - self.verified))
        while queue:
            c = queue.popleft()
            res = self.verify(c)
            if res is None or not res.are_friends:
                continue
            if self.cfg.expand_mutuals:
                for m in sorted(res.mutual_friends):
                    if m != self.victim and m not in self.verified and m not in queue:
                        queue.append(m)

    def finish(self, reason: str) -> CrawlTrace:
        self.trace.terminated_reason = reason
        return self.trace


def _facepile_seed(cfg: StrategyConfig, page: int, call_no: int) -> int:
    return derive_seed(cfg.run_seed, page, call_no)


def _fetch_likes(run: _Run):
    return run.call("likes", run.oracle.liked_pages, run.victim,
                    summary=lambda r: {"hidden": True} if r is HIDDEN
                    else {"pages": sorted(r)})


def _fetch_fan_batches(run: _Run, page_order) -> list[tuple[int, int, set[int]]]:
    """Fetch each page's fan samples in order; returns (total_fans, page_id, fans)."""
    batches = []
    for p in page_order:
        fans: set[int] = set()
        total = 0
        for j in range(run.cfg.facepile_calls_per_page):
            sample = run.call("facepile", run.oracle.facepile, p,
                              _facepile_seed(run.cfg, p, j),
                              summary=lambda r: {"page": r.page,
                                                 "fans": sorted(r.sampled_fans),
                                                 "total": r.total_fan_count})
            fans |= sample.sampled_fans
            total = sample.total_fan_count
        batches.append((total, p, fans))
    return batches


def s1_likes_random(v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    """Pages in a seeded random order, then verify the pooled candidates."""
    run = _Run(v, oracle, cfg, "s1")
    try:
        pages = _fetch_likes(run)
        if pages is HIDDEN:
            return run.finish(NOTHING_ACCESSIBLE)
        order = sorted(pages)
        random.Random(cfg.run_seed).shuffle(order)
        batches = _fetch_fan_batches(run, order)
        candidates: set[int] = set()
        for _, _, fans in batches:
            candidates |= fans
        run.verify_batch(candidates)
        return run.finish(EXHAUSTED)
    except _BudgetHit:
        return run.finish(BUDGET_REACHED)


def _likes_sorted(v: int, oracle, cfg: StrategyConfig, name: str,
                  descending: bool) -> CrawlTrace:
    run = _Run(v, oracle, cfg, name)
    try:
        pages = _fetch_likes(run)
        if pages is HIDDEN:
            return run.finish(NOTHING_ACCESSIBLE)
        batches = _fetch_fan_batches(run, sorted(pages))
        batches.sort(key=lambda b: (-b[0] if descending else b[0], b[1]))
        for _, _, fans in batches:
            run.verify_batch(fans)
        return run.finish(EXHAUSTED)
    except _BudgetHit:
        return run.finish(BUDGET_REACHED)


def s2_likes_ascending(v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    """Candidate batches processed from the least- to the most-fanned page."""
    return _likes_sorted(v, oracle, cfg, "s2", descending=False)


def s3_likes_descending(v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    """Candidate batches processed from the most- to the least-fanned page."""
    return _likes_sorted(v, oracle, cfg, "s3", descending=True)


def s4_pictures(v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    """Harvest likers and commenters of every reachable picture."""
    run = _Run(v, oracle, cfg, "s4")
    try:
        pics = run.call("pictures", run.oracle.public_pictures, v,
                        summary=lambda r: {"pictures": sorted(r)})
        candidates: set[int] = set()
        for i in sorted(pics):
            reactions = run.call("reactions", run.oracle.reactions, i,
                                 summary=lambda r: {"picture": r.picture,
                                                    "likers": sorted(r.likers),
                                                    "commenters": sorted(r.commenters)})
            candidates |= reactions.likers | reactions.commenters
        run.verify_batch(candidates)
        return run.finish(EXHAUSTED)
    except _BudgetHit:
        return run.finish(BUDGET_REACHED)


def _group_strategy(v: int, oracle, cfg: StrategyConfig, name: str,
                    descending: bool) -> CrawlTrace:
    run = _Run(v, oracle, cfg, name)
    try:
        groups = run.call("groups", run.oracle.groups, v,
                          summary=lambda r: {"hidden": True} if r is HIDDEN
                          else {"groups": sorted(r)})
        if groups is HIDDEN:
            return run.finish(NOTHING_ACCESSIBLE)
        # Probe page 0 of each listed group to learn its reported size; a
        # denied probe still burns a request.
        probes = []
        for g in sorted(groups):
            first = run.call("members", run.oracle.group_members, g, 0,
                             summary=lambda r: {"group": g, "page": 0,
                                                "members": sorted(r.members),
                                                "total": r.total,
                                                "has_more": r.has_more})
            if first is not None:
                probes.append((first.total, g, first))
        probes.sort(key=lambda b: (-b[0] if descending else b[0], b[1]))
        batches = []
        for total, g, first in probes:
            members = set(first.members)
            page_index, more = 1, first.has_more
            while more:
                chunk = run.call("members", run.oracle.group_members, g, page_index,
                                 summary=lambda r: {"group": g, "page": page_index,
                                                    "members": sorted(r.members),
                                                    "total": r.total,
                                                    "has_more": r.has_more})
                members |= chunk.members
                more = chunk.has_more
                page_index += 1
            batches.append(members)
        for members in batches:
            run.verify_batch(members)
        return run.finish(EXHAUSTED)
    except _BudgetHit:
        return run.finish(BUDGET_REACHED)


def group_ascending(v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    return _group_strategy(v, oracle, cfg, "gasc", descending=False)


def group_descending(v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    return _group_strategy(v, oracle, cfg, "gdesc", descending=True)


STRATEGIES = {
    "s1": s1_likes_random,
    "s2": s2_likes_ascending,
    "s3": s3_likes_descending,
    "s4": s4_pictures,
    "gasc": group_ascending,
    "gdesc": group_descending,
}

PAGE_STRATEGIES = ("s1", "s2", "s3")
GROUP_STRATEGIES = ("gasc", "gdesc")


def run_strategy(name: str, v: int, oracle, cfg: StrategyConfig) -> CrawlTrace:
    try:
        fn = STRATEGIES[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}") from None
    return fn(v, oracle, cfg)


# -- ground-truth oracles (testing and metrics only) ------------------------

def true_friends(v: int, graph: SocialGraph) -> set[int]:
    """Exact friend set from ground truth, bypassing all privacy."""
    if v not in graph.users:
        raise NotFoundError("user", v)
    return set(graph.users[v].friends)


def reachable_friends_upper_bound(v: int, graph: SocialGraph,
                                  strategy_name: str) -> set[int]:
    """Best case discoverable set per strategy, by direct set algebra."""
    if v not in graph.users:
        raise NotFoundError("user", v)
    user = graph.users[v]
    reachable: set[int] = set()
    if strategy_name in PAGE_STRATEGIES:
        if user.privacy.likes_visible:
            for p in user.likes:
                reachable |= graph.pages[p].fans
    elif strategy_name == "s4":
        pics = user.pictures if user.privacy.pictures_visible else [
            i for i in user.pictures if graph.pictures[i].is_cover]
        for i in pics:
            reachable |= graph.pictures[i].likers | graph.pictures[i].commenters
    elif strategy_name in GROUP_STRATEGIES:
        if user.privacy.groups_visible:
            for g in user.groups:
                if graph.groups[g].visibility == GroupVisibility.PUBLIC:
                    reachable |= graph.groups[g].members
    else:
        raise ValueError(f"unknown strategy {strategy_name!r}")
    return user.friends & reachable
