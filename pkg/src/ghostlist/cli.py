"""Command-line entry point: generate, serve, crawl, report."""
from __future__ import annotations

import signal
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import generate, graphio, harness
from .httpserve import HttpServiceBackend, spawn_http_server
from .service import ServiceConfig
from .strategies import STRATEGIES, StrategyConfig

_seed_option = click.option("--seed", type=int, envvar="GHOSTLIST_SEED",
                            default=0, show_default=True,
                            help="Master seed (env fallback: GHOSTLIST_SEED).")


@click.group()
def main():
    """Simulate hidden-friend-list recovery strategies on synthetic social graphs."""


@main.command("generate")
@click.option("--preset", type=click.Choice(["mixed", "public"]),
              help="Named dataset preset.")
@click.option("--users", type=int, help="Override user count.")
@click.option("--public-fraction", type=float, help="Override public profile fraction.")
@click.option("--mean-degree", type=int, help="Override mean friend count.")
@_seed_option
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="Graph JSON output path.")
def cmd_generate(preset, users, public_fraction, mean_degree, seed, out):
    """Generate a synthetic graph and write it as JSON."""
    params = generate.preset(preset) if preset else generate.GenParams()
    if users is not None:
        params = replace(params, n_users=users)
    if public_fraction is not None:
        params = replace(params, fraction_public_profiles=public_fraction)
    if mean_degree is not None:
        params = replace(params, mean_degree=mean_degree)
    try:
        g = generate.generate_graph(params, seed)
        graphio.save_graph(g, out)
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {out}: {len(g.users)} users, {len(g.pages)} pages, "
               f"{len(g.groups)} groups, {len(g.pictures)} pictures")


@main.command("serve")
@click.option("--graph", "graph_path", required=True,
              type=click.Path(exists=False, dir_okay=False))
@click.option("--port", type=int, default=8040, show_default=True)
@click.option("--sample-size", type=int, default=30, show_default=True)
@click.option("--latency", type=float, default=0.5, show_default=True)
def cmd_serve(graph_path, port, sample_size, latency):
    """Serve a graph over HTTP until interrupted."""
    try:
        g = graphio.load_graph(graph_path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    config = ServiceConfig(sample_size=sample_size, latency=latency)
    try:
        handle = spawn_http_server(g, config, port=port)
    except OSError as exc:
        raise click.ClickException(f"cannot bind port {port}: {exc}")
    click.echo(f"serving on {handle.url} (Ctrl-C to stop)")
    stop = []
    signal.signal(signal.SIGTERM, lambda *a: stop.append(True))
    try:
        while not stop:
            signal.pause()
    except KeyboardInterrupt:
        pass
    finally:
        handle.stop()
    click.echo("stopped")


def _strategy_list(name: str) -> list[str]:
    if name == "all":
        return ["s1", "s2", "s3", "s4"]
    return [name]


@main.command("crawl")
@click.option("--graph", "graph_path", type=click.Path(dir_okay=False),
              help="Graph JSON file (in-process oracle).")
@click.option("--url", help="Base URL of a running serve instance.")
@click.option("--strategy", default="all", show_default=True,
              type=click.Choice(sorted(STRATEGIES) + ["all"]))
@click.option("--victims", default="all-private", show_default=True,
              help='"all", "all-private", "random:K" or comma-separated ids.')
@click.option("--budget", type=int, help="Max requests per (victim, strategy) run.")
@click.option("--accounts", type=int, default=9, show_default=True)
@click.option("--sample-size", type=int, default=30, show_default=True)
@click.option("--latency", type=float, default=0.5, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@_seed_option
@click.option("--plots", is_flag=True, help="Also render figures.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def cmd_crawl(graph_path, url, strategy, victims, budget, accounts, sample_size,
              latency, jobs, seed, plots, out):
    """Run strategies against a graph and write traces plus report files."""
    if (graph_path is None) == (url is None):
        raise click.UsageError("exactly one of --graph / --url is required")
    backend = None
    try:
        if url is not None:
            backend = HttpServiceBackend(url, latency=latency)
            # Victim selection needs the ground truth graph; over HTTP only
            # explicit id lists are supported.
            if victims in ("all", "all-private") or victims.startswith("random:"):
                raise click.ClickException(
                    "--url mode needs an explicit --victims id list")
            g = None
            victim_ids = sorted(int(tok) for tok in victims.split(",") if tok.strip())
        else:
            g = graphio.load_graph(graph_path)
            victim_ids = harness.select_victims(g, victims, seed)
        spec = harness.ExperimentSpec(
            graph=g, victims=victim_ids, strategies=_strategy_list(strategy),
            config=StrategyConfig(budget=budget, run_seed=seed),
            n_accounts=accounts, sample_size=sample_size, latency=latency,
            jobs=jobs)
        if url is not None:
            result = _run_over_http(spec, backend)
        else:
            result = harness.run_experiment(spec)
        harness.export_traces(result, out)
        harness.export_report(result.report, out)
        if plots:
            from .plots import render_report_figures
            render_report_figures(result.report, out)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote report for {len(victim_ids)} victim(s) "
               f"x {len(spec.strategies)} strategies to {out}")


def _run_over_http(spec, backend):
    # True friend counts are not exposed over the wire (that is the point of
    # the privacy model), so recall fractions come out null in this mode.
    from .service import RoundRobinOracle
    from .strategies import run_strategy
    oracle = RoundRobinOracle(backend, spec.n_accounts, latency=spec.latency)
    traces = []
    for v in sorted(spec.victims):
        for name in sorted(spec.strategies):
            cfg = replace(spec.config,
                          run_seed=harness.run_seed_for(spec.config.run_seed, v, name))
            traces.append(run_strategy(name, v, oracle, cfg))
    traces.sort(key=lambda t: (t.victim, t.strategy_name))
    true_counts = {v: 0 for v in spec.victims}
    report = harness.build_report(traces, true_counts, spec.latency)
    return harness.ExperimentResult(report=report, traces=traces,
                                    true_counts=true_counts)


@main.command("report")
@click.option("--in", "indir", required=True, type=click.Path(file_okay=False),
              help="Directory containing a traces/ subdirectory.")
@click.option("--plots", is_flag=True, help="Also render figures.")
@click.option("--out", required=True, type=click.Path(file_okay=False))
def cmd_report(indir, plots, out):
    """Recompute report files from stored crawl traces."""
    tracedir = Path(indir) / "traces"
    if not tracedir.is_dir():
        tracedir = Path(indir)
    try:
        report = harness.report_from_traces(tracedir)
        harness.export_report(report, out)
        if plots:
            from .plots import render_report_figures
            render_report_figures(report, out)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote report to {out}")


if __name__ == "__main__":
    sys.exit(main())
