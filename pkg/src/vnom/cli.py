"""Command-line entry points.

Five subcommands: ``simulate`` writes sampled data to files, ``eps-sweep``
and ``delta-sweep`` run the block-model experiments, ``oracle-suite`` runs
the exact small-instance checks, and ``nominate`` ranks vertices of one
user-supplied graph pair.  Sweep options can come from a key=value config
file, with command-line flags taking precedence.
"""

from __future__ import annotations

import argparse
import sys

from . import harness

__all__ = ["main"]


def _dim(text):
    """Parse an integer knob that also accepts 'auto' (selection heuristic)."""
    if text.lower() in ("auto", "none"):
        return None
    return int(text)


def _grid(cast):
    def parse(text):
        parts = [p for p in text.replace(",", " ").split() if p]
        if not parts:
            raise argparse.ArgumentTypeError("empty grid")
        return tuple(cast(p) for p in parts)
    return parse


def _add_sweep_options(sub, param):
    sub.add_argument("--config", help="key=value config file; flags override it")
    sub.add_argument("--out-dir", help="directory for trials/summary CSVs")
    sub.add_argument("--trials", type=int, help="Monte-Carlo trials per grid point")
    sub.add_argument("--paper-scale", action="store_true",
                     help=f"use {harness.PAPER_TRIALS} trials instead of "
                          f"{harness.DESK_TRIALS} unless --trials is given")
    sub.add_argument("--seed", type=int, dest="root_seed", help="root seed")
    sub.add_argument("--k-grid", type=_grid(int), help="comma-separated k values")
    sub.add_argument("--n-total", type=int, help="vertices in the simulation")
    sub.add_argument("--n-seeds", type=int, help="seed pairs per trial")
    sub.add_argument("--embed-dim", type=_dim,
                     help="embedding dimension, or 'auto' for the elbow rule")
    sub.add_argument("--n-components", type=_dim,
                     help="mixture components, or 'auto' for a BIC scan")
    if param == "eps":
        sub.add_argument("--eps-grid", type=_grid(float),
                         help="topology-signal grid")
        sub.add_argument("--delta", type=float, help="fixed feature signal")
    else:
        sub.add_argument("--delta-grid", type=_grid(float),
                         help="feature-signal grid")
        sub.add_argument("--eps", type=float, help="fixed topology signal")


def _sweep_config(args, kind):
    settings = {}
    if args.config:
        settings.update(harness.coerce_config_entries(harness.load_config(args.config)))
    settings.pop("kind", None)
    for key in ("out_dir", "trials", "root_seed", "k_grid", "n_total", "n_seeds",
                "embed_dim", "n_components", "eps_grid", "delta", "delta_grid",
                "eps"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if "trials" not in settings:
        settings["trials"] = (harness.PAPER_TRIALS if args.paper_scale
                              else harness.DESK_TRIALS)
    return harness.ExperimentConfig(kind=kind, **settings)


def _print_summary(result):
    rows = result.summary
    header = list(rows[0].keys())
    print("  ".join(header))
    for row in rows:
        print("  ".join(f"{row[c]:.3f}" if isinstance(row[c], float) else str(row[c])
                        for c in header))
    if result.summary_path:
        print(f"wrote {result.trials_path} and {result.summary_path}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="vnom",
        description="Vertex nomination experiments on attributed graph pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser(
        "simulate", help="sample a data set and write it to files")
    sim.add_argument("--out-dir", required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--connectome", action="store_true",
                     help="write the synthetic connectome demo pair instead "
                          "of the block-model pair")
    sim.add_argument("--eps", type=float, default=0.25)
    sim.add_argument("--delta", type=float, default=1.0)
    sim.add_argument("--n-total", type=int, default=250)
    sim.add_argument("--n-seeds", type=int, default=10)

    eps = sub.add_parser("eps-sweep",
                         help="sweep the topology signal, compare combined "
                              "nomination against features only")
    _add_sweep_options(eps, "eps")

    dlt = sub.add_parser("delta-sweep",
                         help="sweep the feature signal, compare combined "
                              "nomination against the graph only")
    _add_sweep_options(dlt, "delta")

    suite = sub.add_parser("oracle-suite",
                           help="exact checks on the bundled small instances")
    suite.add_argument("--config", help="key=value config file")
    suite.add_argument("--out-dir", help="directory for report CSV and verdicts")

    nom = sub.add_parser("nominate", help="rank one graph pair from files")
    nom.add_argument("--g1", required=True, help="first graph edge list")
    nom.add_argument("--g2", required=True, help="second graph edge list")
    nom.add_argument("--features", help="vertex-feature CSV (both graphs)")
    nom.add_argument("--features2", help="second graph's features, if different")
    nom.add_argument("--seeds", required=True, help="seed-pair file")
    nom.add_argument("--interest", required=True, help="interest-vertex file")
    nom.add_argument("--out-dir", required=True)
    nom.add_argument("--no-graph", action="store_true",
                     help="rank on features alone")
    nom.add_argument("--no-features", action="store_true",
                     help="rank on topology alone")
    nom.add_argument("--embed-dim", type=_dim, default=None)
    nom.add_argument("--n-components", type=_dim, default=None)
    nom.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)

    if args.command == "simulate":
        if args.connectome:
            paths = harness.write_connectome_demo(args.out_dir, seed=args.seed)
        else:
            paths = harness.write_sim_files(args.out_dir, args.eps, args.delta,
                                            seed=args.seed, n_total=args.n_total,
                                            n_seeds=args.n_seeds)
        for name in sorted(paths):
            print(f"wrote {paths[name]}")
        return 0

    if args.command == "eps-sweep":
        _print_summary(harness.run_eps_sweep(_sweep_config(args, "eps_sweep")))
        return 0

    if args.command == "delta-sweep":
        _print_summary(harness.run_delta_sweep(_sweep_config(args, "delta_sweep")))
        return 0

    if args.command == "oracle-suite":
        settings = {}
        if args.config:
            settings.update(
                harness.coerce_config_entries(harness.load_config(args.config)))
        settings.pop("kind", None)
        if args.out_dir is not None:
            settings["out_dir"] = args.out_dir
        config = harness.ExperimentConfig(kind="oracle_suite", **settings)
        report = harness.run_oracle_suite(config)
        for line in report.verdicts:
            print(line)
        print("ALL CHECKS PASSED" if report.ok else "FAILURES PRESENT")
        return 0 if report.ok else 1

    if args.command == "nominate":
        if args.no_graph and args.no_features:
            parser.error("--no-graph and --no-features cannot be combined")
        out = harness.nominate_files(
            args.g1, args.g2, args.features, args.seeds, args.interest,
            features2_path=args.features2, out_dir=args.out_dir,
            use_graph=not args.no_graph, use_features=not args.no_features,
            embed_dim=args.embed_dim, n_components=args.n_components,
            seed=args.seed)
        top = list(zip(out.result.order, out.result.scores))[:5]
        for rank, (v, s) in enumerate(top, start=1):
            print(f"{rank:2d}. vertex {v}  distance {s:.4f}")
        print(f"wrote {out.ranked_path} and {out.curve_path}")
        return 0

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
