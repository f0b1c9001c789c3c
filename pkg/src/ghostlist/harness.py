"""Multi-victim, multi-strategy experiment runner and report writer."""
from __future__ import annotations

import csv
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .graph import SocialGraph
from .service import OsnService, RoundRobinOracle, ServiceConfig, derive_seed
from .strategies import (CrawlTrace, StrategyConfig, TraceEvent, run_strategy,
                         true_friends)


@dataclass
class ExperimentSpec:
    graph: SocialGraph
    victims: list[int]
    strategies: list[str]
    config: StrategyConfig = field(default_factory=StrategyConfig)
    n_accounts: int = 9
    sample_size: int = 30
    latency: float = 0.5
    jobs: int = 1

    def validate(self) -> None:
        if not self.victims:
            raise ValueError("empty victim set")
        if not self.strategies:
            raise ValueError("no strategies selected")
        if self.n_accounts < 1:
            raise ValueError("n_accounts must be >= 1")
        unknown = [v for v in self.victims if v not in self.graph.users]
        if unknown:
            raise ValueError(f"unknown victim id(s): {unknown}")


def select_victims(graph: SocialGraph, selector: str, seed: int = 0) -> list[int]:
    """Resolve "all", "all-private", "random:K" or a comma list of ids."""
    if selector == "all":
        return sorted(graph.users)
    if selector == "all-private":
        return sorted(u.id for u in graph.users.values()
                      if not u.privacy.friends_visible)
    if selector.startswith("random:"):
        k = int(selector.split(":", 1)[1])
        ids = sorted(graph.users)
        rng = random.Random(derive_seed(seed, "victim-pick"))
        return sorted(rng.sample(ids, min(k, len(ids))))
    return sorted(int(tok) for tok in selector.split(",") if tok.strip())


@dataclass
class RecallCurve:
    strategy_name: str
    requests: list[int]
    mean_found: list[float]
    times: list[float]


@dataclass
class ExperimentReport:
    strategies: list[str]
    victims: list[int]
    latency: float
    curves: dict[str, RecallCurve]
    counts: dict[int, dict[str, int]]
    recall: dict[int, dict[str, float | None]]
    victims_reached: dict[str, int]
    mean_recall: dict[str, float | None]
    total_requests: dict[str, int]

    @property
    def ledger_length(self) -> int:
        return sum(self.total_requests.values())


@dataclass
class ExperimentResult:
    report: ExperimentReport
    traces: list[CrawlTrace]
    true_counts: dict[int, int]
    service: OsnService | None = None


def run_seed_for(base_seed: int, victim: int, strategy: str) -> int:
    return derive_seed(base_seed, victim, strategy)


def run_experiment(spec: ExperimentSpec, backend=None) -> ExperimentResult:
    spec.validate()
    service = None
    if backend is None:
        service = OsnService(spec.graph, ServiceConfig(sample_size=spec.sample_size,
                                                       latency=spec.latency))
        backend = service
    oracle = RoundRobinOracle(backend, spec.n_accounts, latency=spec.latency)
    runs = [(v, s) for v in sorted(spec.victims) for s in sorted(spec.strategies)]

    def one(run):
        v, name = run
        cfg = replace(spec.config,
                      run_seed=run_seed_for(spec.config.run_seed, v, name))
        return run_strategy(name, v, oracle, cfg)

    if spec.jobs > 1:
        with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
            traces = list(pool.map(one, runs))
    else:
        traces = [one(r) for r in runs]
    traces.sort(key=lambda t: (t.victim, t.strategy_name))
    true_counts = {v: len(true_friends(v, spec.graph)) for v in spec.victims}
    report = build_report(traces, true_counts, spec.latency)
    return ExperimentResult(report=report, traces=traces,
                            true_counts=true_counts, service=service)


def recall_curve(traces: list[CrawlTrace], latency: float = 0.5) -> RecallCurve:
    """Mean friends-found per request index; short traces carry their final count."""
    if not traces:
        raise ValueError("recall_curve needs at least one trace")
    names = {t.strategy_name for t in traces}
    if len(names) > 1:
        raise ValueError(f"traces from multiple strategies: {sorted(names)}")
    per_trace = [t.found_by_request() for t in traces]
    length = max(len(c) for c in per_trace)
    means = []
    for r in range(length):
        total = sum(c[r] if r < len(c) else c[-1] for c in per_trace)
        means.append(total / len(per_trace))
    return RecallCurve(strategy_name=names.pop(),
                       requests=list(range(length)),
                       mean_found=means,
                       times=[r * latency for r in range(length)])


def per_victim_best(counts: dict[int, dict[str, int]]) -> list[dict]:
    """Normalized table: best strategy 100%, the rest found/best*100 (0.1 steps).

    Victims whose every strategy found nothing are dropped.
    """
    rows = []
    for v in sorted(counts):
        per = counts[v]
        best = max(per.values())
        if best == 0:
            continue
        pct = {s: round(per[s] / best * 100, 1) for s in per}
        winners = sorted(s for s in per if per[s] == best)
        rows.append({"victim": v, "counts": dict(per), "pct": pct,
                     "best": winners})
    return rows


def build_report(traces: list[CrawlTrace], true_counts: dict[int, int],
                 latency: float) -> ExperimentReport:
    traces = sorted(traces, key=lambda t: (t.victim, t.strategy_name))
    strategies = sorted({t.strategy_name for t in traces})
    victims = sorted({t.victim for t in traces})
    by_strategy = {s: [t for t in traces if t.strategy_name == s]
                   for s in strategies}
    curves = {s: recall_curve(ts, latency) for s, ts in by_strategy.items()}
    counts = {v: {} for v in victims}
    recall = {v: {} for v in victims}
    for t in traces:
        counts[t.victim][t.strategy_name] = len(t.friends_found)
        n_true = true_counts.get(t.victim, 0)
        recall[t.victim][t.strategy_name] = (
            len(t.friends_found) / n_true if n_true else None)
    victims_reached = {
        s: sum(1 for t in ts if t.friends_found) for s, ts in by_strategy.items()}
    mean_recall = {}
    for s in strategies:
        fracs = [recall[v][s] for v in victims if recall[v].get(s) is not None]
        mean_recall[s] = sum(fracs) / len(fracs) if fracs else None
    total_requests = {s: sum(t.requests for t in ts)
                      for s, ts in by_strategy.items()}
    return ExperimentReport(strategies=strategies, victims=victims,
                            latency=latency, curves=curves, counts=counts,
                            recall=recall, victims_reached=victims_reached,
                            mean_recall=mean_recall,
                            total_requests=total_requests)


# -- file outputs -----------------------------------------------------------

def export_report(report: ExperimentReport, outdir) -> list[Path]:
    if not report.strategies:
        raise ValueError("report has no strategies")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    curves_path = outdir / "curves.csv"
    with curves_path.open("w", encoding="utf-8", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["strategy", "requests", "time", "mean_found"])
        for s in report.strategies:
            c = report.curves[s]
            for r, t, m in zip(c.requests, c.times, c.mean_found):
                w.writerow([s, r, f"{t:.2f}", f"{m:.6f}"])
    pervictim_path = outdir / "pervictim.csv"
    rows = per_victim_best(report.counts)
    with pervictim_path.open("w", encoding="utf-8", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        header = ["victim"]
        for s in report.strategies:
            header += [f"{s}_found", f"{s}_pct"]
        header.append("best_strategy")
        w.writerow(header)
        for row in rows:
            out = [row["victim"]]
            for s in report.strategies:
                out += [row["counts"].get(s, 0), f"{row['pct'].get(s, 0.0):.1f}"]
            out.append("|".join(row["best"]))
            w.writerow(out)
    summary_path = outdir / "summary.json"
    summary = {
        "n_victims": len(report.victims),
        "latency": report.latency,
        "ledger_length": report.ledger_length,
        "strategies": {
            s: {
                "mean_recall": report.mean_recall[s],
                "victims_reached": report.victims_reached[s],
                "total_requests": report.total_requests[s],
            }
            for s in report.strategies
        },
    }
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    return [curves_path, pervictim_path, summary_path]


def export_traces(result: ExperimentResult, outdir) -> Path:
    tracedir = Path(outdir) / "traces"
    tracedir.mkdir(parents=True, exist_ok=True)
    for t in result.traces:
        meta = {
            "victim": t.victim,
            "strategy": t.strategy_name,
            "latency": result.report.latency,
            "friends_found": sorted(t.friends_found),
            "terminated": t.terminated_reason,
            "true_friends": result.true_counts.get(t.victim, 0),
        }
        lines = [json.dumps({"no": 0, "t": 0.0, "kind": "meta", "data": meta},
                            sort_keys=True)]
        lines += [json.dumps({"no": ev.no, "t": ev.t, "kind": ev.kind,
                              "data": ev.data}, sort_keys=True)
                  for ev in t.events]
        path = tracedir / f"{t.strategy_name}__{t.victim}.jsonl"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return tracedir


def load_traces(tracedir) -> tuple[list[CrawlTrace], dict[int, int], float]:
    tracedir = Path(tracedir)
    files = sorted(tracedir.glob("*.jsonl"))
    if not files:
        raise ValueError(f"no trace files in {tracedir}")
    traces, true_counts = [], {}
    latency = 0.5
    for path in files:
        trace = None
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{lineno}: bad JSON ({exc.msg})") from exc
            if rec.get("kind") == "meta":
                meta = rec["data"]
                trace = CrawlTrace(victim=meta["victim"],
                                   strategy_name=meta["strategy"],
                                   friends_found=set(meta["friends_found"]),
                                   terminated_reason=meta["terminated"])
                true_counts[meta["victim"]] = meta["true_friends"]
                latency = meta["latency"]
            else:
                if trace is None:
                    raise ValueError(f"{path}:{lineno}: event before meta line")
                trace.events.append(TraceEvent(no=rec["no"], t=rec["t"],
                                               kind=rec["kind"], data=rec["data"]))
        if trace is None:
            raise ValueError(f"{path}:1: missing meta line")
        traces.append(trace)
    return traces, true_counts, latency


def report_from_traces(tracedir) -> ExperimentReport:
    traces, true_counts, latency = load_traces(tracedir)
    return build_report(traces, true_counts, latency)
