"""Oracle layer: the only view of the graph a crawler gets.

Exposes the seven public primitives, enforces privacy settings, counts every
request in a ledger and advances a simulated clock.
"""
from __future__ import annotations

import datetime
import hashlib
import random
import struct
import threading
from dataclasses import dataclass

from .graph import GroupVisibility


class NotFoundError(KeyError):
    def __init__(self, kind: str, entity_id: int):
        super().__init__(f"{kind} {entity_id} not found")
        self.kind = kind
        self.entity_id = entity_id


class SelfQueryError(ValueError):
    pass


class AccessDeniedError(PermissionError):
    pass


class RateLimitedError(RuntimeError):
    pass


class _Hidden:
    def __repr__(self):
        return "HIDDEN"

    def __bool__(self):
        return False


#: Sentinel returned when a privacy flag hides an endpoint's result.
HIDDEN = _Hidden()


def derive_seed(*parts: int | str) -> int:
    """Stable 63-bit seed from a mixed tuple of ints and strings."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, int):
            h.update(b"i" + struct.pack(">q", part))
        else:
            h.update(b"s" + part.encode("utf-8"))
    return int.from_bytes(h.digest(), "big") >> 1


@dataclass
class Account:
    account_id: int
    requests_issued: int = 0
    tokens: float = 0.0
    last_refill: float = 0.0


@dataclass
class FanSample:
    page: int
    sampled_fans: set[int]
    total_fan_count: int


@dataclass
class MutualResult:
    are_friends: bool
    friends_since: datetime.date | None
    mutual_friends: set[int]


@dataclass
class ReactionSet:
    picture: int
    likers: set[int]
    commenters: set[int]


@dataclass
class MembersPage:
    members: set[int]
    total: int
    has_more: bool


@dataclass
class LedgerEntry:
    sequence_no: int
    account_id: int
    endpoint: str
    timestamp: float


@dataclass
class ServiceConfig:
    sample_size: int = 30
    latency: float = 0.5
    rate_limit: float | None = None   # requests per simulated second, per account
    rate_limit_burst: int = 1


GROUP_PAGE_SIZE = 100


class OsnService:
    """In-process oracle over an immutable SocialGraph.

    Safe for concurrent callers: the graph is read-only and the ledger,
    clock and per-account counters are updated under one lock.
    """

    def __init__(self, graph, config: ServiceConfig | None = None):
        self.graph = graph
        self.config = config or ServiceConfig()
        self.clock = 0.0
        self.ledger: list[LedgerEntry] = []
        self.accounts: dict[int, Account] = {}
        self._lock = threading.Lock()

    # -- accounting ---------------------------------------------------------

    def _record(self, account_id: int, endpoint: str) -> None:
        with self._lock:
            acct = self.accounts.get(account_id)
            if acct is None:
                burst = self.config.rate_limit_burst
                acct = Account(account_id, tokens=float(burst))
                self.accounts[account_id] = acct
            self.clock += self.config.latency
            self.ledger.append(LedgerEntry(len(self.ledger) + 1, account_id,
                                           endpoint, self.clock))
            acct.requests_issued += 1
            rate = self.config.rate_limit
            if rate is not None:
                acct.tokens = min(float(self.config.rate_limit_burst),
                                  acct.tokens + (self.clock - acct.last_refill) * rate)
                acct.last_refill = self.clock
                if acct.tokens < 1.0:
                    raise RateLimitedError(f"account {account_id} over rate limit")
                acct.tokens -= 1.0

    def _user(self, v: int):
        user = self.graph.users.get(v)
        if user is None:
            raise NotFoundError("user", v)
        return user

    # -- the seven primitives -----------------------------------------------

    def get_liked_pages(self, account_id: int, v: int):
        self._record(account_id, "likes")
        user = self._user(v)
        if not user.privacy.likes_visible:
            return HIDDEN
        return set(user.likes)

    def facepile(self, account_id: int, p: int, call_seed: int) -> FanSample:
        self._record(account_id, "facepile")
        page = self.graph.pages.get(p)
        if page is None:
            raise NotFoundError("page", p)
        fans = sorted(page.fans)
        k = min(self.config.sample_size, len(fans))
        rng = random.Random(derive_seed(self.graph.seed, p, call_seed))
        return FanSample(page=p, sampled_fans=set(rng.sample(fans, k)),
                         total_fan_count=len(fans))

    def mutual_content(self, account_id: int, a: int, b: int) -> MutualResult:
        self._record(account_id, "mutual")
        if a == b:
            raise SelfQueryError(f"cannot query user {a} against itself")
        ua, ub = self._user(a), self._user(b)
        are = b in ua.friends
        since = None
        if are:
            days = derive_seed(self.graph.seed, min(a, b), max(a, b)) % 3000
            since = datetime.date(2005, 1, 1) + datetime.timedelta(days=days)
        return MutualResult(are_friends=are, friends_since=since,
                            mutual_friends=ua.friends & ub.friends)

    def get_public_pictures(self, account_id: int, v: int) -> set[int]:
        self._record(account_id, "pictures")
        user = self._user(v)
        if user.privacy.pictures_visible:
            return set(user.pictures)
        return {i for i in user.pictures if self.graph.pictures[i].is_cover}

    def get_picture_reactions(self, account_id: int, i: int) -> ReactionSet:
        self._record(account_id, "reactions")
        pic = self.graph.pictures.get(i)
        if pic is None:
            raise NotFoundError("picture", i)
        return ReactionSet(picture=i, likers=set(pic.likers),
                           commenters=set(pic.commenters))

    def get_groups(self, account_id: int, v: int):
        self._record(account_id, "groups")
        user = self._user(v)
        if not user.privacy.groups_visible:
            return HIDDEN
        return {g for g in user.groups
                if self.graph.groups[g].visibility != GroupVisibility.HIDDEN}

    def get_group_members(self, account_id: int, g: int, page_index: int) -> MembersPage:
        self._record(account_id, "members")
        group = self.graph.groups.get(g)
        if group is None:
            raise NotFoundError("group", g)
        if group.visibility != GroupVisibility.PUBLIC:
            raise AccessDeniedError(f"group {g} is not accessible")
        members = sorted(group.members)
        start = page_index * GROUP_PAGE_SIZE
        chunk = members[start:start + GROUP_PAGE_SIZE]
        return MembersPage(members=set(chunk), total=len(members),
                           has_more=start + GROUP_PAGE_SIZE < len(members))


class RoundRobinOracle:
    """Account-free oracle for strategies; call k goes to account k mod n."""

    def __init__(self, backend, n_accounts: int = 9, latency: float | None = None):
        if n_accounts < 1:
            raise ValueError("n_accounts must be >= 1")
        self.backend = backend
        self.n_accounts = n_accounts
        self.latency = latency if latency is not None else getattr(
            getattr(backend, "config", None), "latency", 0.5)
        self._calls = 0
        self._lock = threading.Lock()

    def _acct(self) -> int:
        with self._lock:
            acct = self._calls % self.n_accounts
            self._calls += 1
            return acct

    def liked_pages(self, v):
        return self.backend.get_liked_pages(self._acct(), v)

    def facepile(self, p, call_seed):
        return self.backend.facepile(self._acct(), p, call_seed)

    def mutual(self, a, b):
        return self.backend.mutual_content(self._acct(), a, b)

    def public_pictures(self, v):
        return self.backend.get_public_pictures(self._acct(), v)

    def reactions(self, i):
        return self.backend.get_picture_reactions(self._acct(), i)

    def groups(self, v):
        return self.backend.get_groups(self._acct(), v)

    def group_members(self, g, page_index):
        return self.backend.get_group_members(self._acct(), g, page_index)
