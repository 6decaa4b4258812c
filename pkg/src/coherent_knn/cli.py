"""Command-line experiment harness.

Subcommands: validate-network (single-photon uniformity check over a
synthesized multiport), curves (plot-ready CSV sweeps), classify (full
split/scale/KNN run with a JSON report), boundary (decision-boundary grid
CSV), and resources (gate/photon audit). Every stochastic command records
its seed in the output metadata and is byte-reproducible for a fixed
configuration.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import traceback
from pathlib import Path

import numpy as np
from scipy import stats as scipy_stats

from . import datasets, knn, linear_optics, metric, photonic, resources
from .datasets import DataError


class ConfigError(Exception):
    """Flags or their combination do not describe a runnable experiment."""


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _json_dump(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


def _csv_lines(header: list[str], rows, meta: dict | None = None) -> str:
    lines = []
    if meta:
        for key in sorted(meta):
            lines.append(f"# {key}={meta[key]}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}")


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected a comma-separated float list, got {text!r}")


def _noise_from_args(args) -> photonic.NoiseModel:
    return photonic.NoiseModel(
        transmissivity_eta=args.eta, detector_efficiency_tau=args.tau
    )


# ---------------------------------------------------------------------------
# validate-network


def run_validate_network(args) -> int:
    m = args.modes
    if not linear_optics.is_power_of_two(m) or m < 2:
        raise ConfigError(f"--modes must be a power of two >= 2, got {m}")
    if not args.exact and args.runs < 1:
        raise ConfigError(f"--runs must be at least 1, got {args.runs}")
    layout = linear_optics.synthesize_walsh_hadamard(m)
    if args.dump_layout:
        Path(args.dump_layout).write_text(layout.to_json(), encoding="utf-8")

    rng = np.random.default_rng(args.seed)
    ports = []
    for port in range(m):
        probs = np.abs(photonic.distribute_single_photon(m, port)) ** 2
        if args.exact:
            ports.append(
                {"input_port": port, "probabilities": [float(p) for p in probs]}
            )
            continue
        outcomes = rng.choice(m, size=args.runs, p=probs / probs.sum())
        counts = np.bincount(outcomes, minlength=m)
        freqs = counts / args.runs
        expected = args.runs / m
        chi_square = float(np.sum((counts - expected) ** 2 / expected))
        ports.append(
            {
                "input_port": port,
                "frequencies": [float(f) for f in freqs],
                "chi_square": chi_square,
                "degrees_of_freedom": m - 1,
                "p_value": float(scipy_stats.chi2.sf(chi_square, m - 1)),
            }
        )
    payload = {
        "modes": m,
        "mode": "exact" if args.exact else "sampled",
        "runs": None if args.exact else args.runs,
        "seed": None if args.exact else args.seed,
        "beam_splitters": len(layout.placements),
        "ports": ports,
    }
    if args.format == "json":
        _emit(_json_dump(payload), args.out)
    else:
        key = "probabilities" if args.exact else "frequencies"
        rows = [
            (entry["input_port"], outcome, value)
            for entry in ports
            for outcome, value in enumerate(entry[key])
        ]
        meta = {"modes": m, "mode": payload["mode"],
                "runs": payload["runs"], "seed": payload["seed"]}
        _emit(_csv_lines(["input_port", "output_port", key[:-3] + "y"], rows, meta), args.out)
    return 0


# ---------------------------------------------------------------------------
# curves


def run_curves(args) -> int:
    rows = []
    if args.which == "p0_vs_distance":
        n = args.n_features
        grid = np.linspace(0.0, n, args.points)
        for alpha_sq in _parse_float_list(args.alpha_sq_series):
            for d in grid:
                rows.append((float(d), float(np.exp(-(alpha_sq / n) * d)), f"alpha_sq={alpha_sq:g}"))
        meta = {"which": args.which, "n_features": n}
    elif args.which == "cdm_vs_manhattan":
        grid = np.linspace(0.0, math.pi / 2, args.points)
        for d in grid:
            rows.append((float(d), float(1.0 - math.cos(d)), "cdm"))
        for d in grid:
            rows.append((float(d), float(d), "manhattan"))
        meta = {"which": args.which}
    elif args.which == "fidelity_vs_eta":
        grid = np.linspace(0.0, 1.0, args.points)
        for beta_sq in _parse_float_list(args.beta_sq_series):
            for eta in grid:
                rows.append(
                    (float(eta), photonic.transmission_fidelity(beta_sq, float(eta)), f"beta_sq={beta_sq:g}")
                )
        meta = {"which": args.which}
    elif args.which == "detector_error":
        for tau in _parse_float_list(args.tau_series):
            for cutoff in range(1, args.max_cutoff + 1):
                err = photonic.detector_error_probability(
                    args.alpha_sq, args.n_features, args.delta, tau, cutoff
                )
                rows.append((cutoff, err, f"tau={tau:g}"))
        meta = {
            "which": args.which,
            "alpha_sq": args.alpha_sq,
            "n_features": args.n_features,
            "delta": args.delta,
        }
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown curve {args.which!r}")

    if not rows:
        raise ConfigError("sweep produced no rows; check the range flags")
    if args.format == "json":
        _emit(_json_dump({"meta": meta, "rows": rows}), args.out)
    else:
        _emit(_csv_lines(["x", "y", "series"], rows, meta), args.out)
    return 0


# ---------------------------------------------------------------------------
# dataset plumbing shared by classify and boundary


def _resolve_dataset(args) -> datasets.LabeledDataset:
    if (args.dataset is None) == (args.family is None):
        raise ConfigError("give exactly one of --dataset or --family")
    if args.family is not None:
        ds = datasets.generate_synthetic(
            args.family, count=args.count, noise_sigma=args.noise_sigma, seed=args.seed
        )
    elif args.dataset in datasets.BENCHMARK_LABEL_COLUMNS and not Path(args.dataset).is_file():
        ds = datasets.load_named(args.dataset)
    else:
        label_column: str | int = args.label_column
        if isinstance(label_column, str):
            try:
                label_column = int(label_column)
            except ValueError:
                pass
        ds = datasets.load_csv(
            args.dataset,
            label_column=label_column,
            delimiter=args.delimiter,
            header=not args.no_header,
        )
    if args.features is not None:
        ds = datasets.select_features(ds, _parse_int_list(args.features))
    return ds


def _build_metric(args):
    if args.metric == "exact":
        return metric.cdm_exact
    if args.metric == "manhattan":
        return metric.manhattan
    sampling_seed = args.sampling_seed if args.sampling_seed is not None else args.seed
    rng = np.random.default_rng(sampling_seed)
    return metric.sampled_metric(args.alpha_sq, args.runs, _noise_from_args(args), rng)


def _split_and_scale(ds, args):
    spec = datasets.SplitSpec(
        train_fraction=args.split_fraction, seed=args.seed, stratified=args.stratified
    )
    train, test = datasets.split(ds, spec)
    scaler = metric.fit_scaler(train.features)
    train_phases = metric.phase_matrix(train.features, scaler)
    test_phases = metric.phase_matrix(test.features, scaler)
    return train, test, scaler, train_phases, test_phases


def run_classify(args) -> int:
    ds = _resolve_dataset(args)
    train, test, _, train_phases, test_phases = _split_and_scale(ds, args)
    dist = _build_metric(args)
    report = knn.evaluate(
        train_phases, train.labels, test_phases, test.labels, args.k, dist, ds.class_set
    )
    audit = resources.audit_resources(train.size, ds.n_features)
    payload = {
        "dataset": ds.name,
        "feature_names": list(ds.feature_names),
        "class_set": list(ds.class_set),
        "k": args.k,
        "metric": args.metric,
        "seed": args.seed,
        "split_fraction": args.split_fraction,
        "stratified": args.stratified,
        "train_size": train.size,
        "test_size": test.size,
        "accuracy": report.accuracy,
        "confusion_matrix": report.confusion.tolist(),
        "per_point_predictions": [
            {
                "index": i,
                "true_label": test.labels[i],
                "predicted_label": p.predicted_label,
                "neighbor_indices": list(p.neighbor_indices),
                "class_weights": {c: w for c, w in p.class_weights.items()},
            }
            for i, p in enumerate(report.predictions)
        ],
        "resource_audit": {
            "beam_splitters": audit.beam_splitters,
            "cross_kerr_gates": audit.cross_kerr_gates,
            "phase_shifters": audit.phase_shifters,
            "photons": audit.photons,
            "space_complexity_terms": audit.space_complexity_terms,
            "training_points": audit.training_points,
            "features": audit.features,
        },
    }
    if args.metric == "sampled":
        payload["sampling"] = {
            "sampling_seed": args.sampling_seed if args.sampling_seed is not None else args.seed,
            "alpha_sq": args.alpha_sq,
            "runs": args.runs,
            "eta": args.eta,
            "tau": args.tau,
        }
    if args.format == "csv":
        rows = [
            (p["index"], p["true_label"], p["predicted_label"])
            for p in payload["per_point_predictions"]
        ]
        meta = {"dataset": ds.name, "k": args.k, "metric": args.metric,
                "seed": args.seed, "accuracy": report.accuracy}
        _emit(_csv_lines(["index", "true_label", "predicted_label"], rows, meta), args.out)
    else:
        _emit(_json_dump(payload), args.out)
    return 0


def run_boundary(args) -> int:
    ds = _resolve_dataset(args)
    if ds.n_features != 2:
        raise DataError(
            f"decision boundaries need exactly 2 features, dataset has {ds.n_features} "
            "(use --features to project)"
        )
    try:
        w_text, h_text = args.grid.lower().split("x")
        width, height = int(w_text), int(h_text)
    except ValueError:
        raise ConfigError(f"--grid expects WxH, got {args.grid!r}")
    if width < 2 or height < 2:
        raise ConfigError("grid must be at least 2x2")

    train, test, scaler, train_phases, _ = _split_and_scale(ds, args)
    dist = _build_metric(args)

    lo = ds.features.min(axis=0)
    hi = ds.features.max(axis=0)
    margin = 0.1 * (hi - lo)
    xs = np.linspace(lo[0] - margin[0], hi[0] + margin[0], width)
    ys = np.linspace(lo[1] - margin[1], hi[1] + margin[1], height)

    rows = []
    for y in ys:
        for x in xs:
            phases = metric.to_phases(np.array([x, y]), scaler)
            pred = knn.classify(
                train_phases, train.labels, phases, args.k, dist, ds.class_set
            )
            rows.append(("grid", float(x), float(y), pred.predicted_label))
    for point, label in zip(test.features, test.labels):
        rows.append(("test", float(point[0]), float(point[1]), label))

    meta = {
        "dataset": ds.name,
        "k": args.k,
        "metric": args.metric,
        "seed": args.seed,
        "grid": f"{width}x{height}",
    }
    if args.format == "json":
        _emit(_json_dump({"meta": meta, "rows": rows}), args.out)
    else:
        _emit(_csv_lines(["kind", "feature_1", "feature_2", "label"], rows, meta), args.out)
    return 0


def run_resources(args) -> int:
    audit = resources.audit_resources(args.training_points, args.features)
    payload = {
        "requested": {
            "training_points": audit.requested_training_points,
            "features": audit.requested_features,
        },
        "padded": {
            "training_points": audit.training_points,
            "features": audit.features,
        },
        "beam_splitters": audit.beam_splitters,
        "cross_kerr_gates": audit.cross_kerr_gates,
        "phase_shifters": audit.phase_shifters,
        "photons": audit.photons,
        "space_complexity_terms": audit.space_complexity_terms,
    }
    if args.format == "csv":
        rows = [
            ("beam_splitters", audit.beam_splitters),
            ("cross_kerr_gates", audit.cross_kerr_gates),
            ("phase_shifters", audit.phase_shifters),
            ("photons", audit.photons),
            ("space_photon_register", audit.space_complexity_terms["photon_register"]),
            ("space_coherent_registers", audit.space_complexity_terms["coherent_registers"]),
        ]
        meta = {
            "training_points": audit.training_points,
            "features": audit.features,
        }
        _emit(_csv_lines(["quantity", "count"], rows, meta), args.out)
    else:
        _emit(_json_dump(payload), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_io_flags(p, default_format: str) -> None:
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument(
        "--format", choices=["csv", "json"], default=default_format,
        help=f"output format (default: {default_format})",
    )


def _add_experiment_flags(p) -> None:
    p.add_argument("--dataset", help="benchmark name (iris, wine, sonar) or a CSV path")
    p.add_argument(
        "--family", choices=datasets.SYNTHETIC_FAMILIES,
        help="generate a synthetic dataset instead of loading one",
    )
    p.add_argument("--count", type=int, default=200, help="synthetic sample count (default: 200)")
    p.add_argument(
        "--noise-sigma", type=float, default=None,
        help="synthetic noise std (default: per-family)",
    )
    p.add_argument("--label-column", default="label",
                   help="label column name or index for CSV paths (default: label)")
    p.add_argument("--delimiter", default=",", help="CSV delimiter (default: ,)")
    p.add_argument("--no-header", action="store_true", help="CSV file has no header row")
    p.add_argument("--features", help="comma-separated feature column indices to keep")
    p.add_argument("--k", type=int, default=3, help="number of neighbours (default: 3)")
    p.add_argument(
        "--metric", choices=["exact", "sampled", "manhattan"], default="exact",
        help="distance mode (default: exact)",
    )
    p.add_argument(
        "--alpha-sq", type=float, default=None,
        help="resource mean photon number |alpha|^2 (default: one per padded mode)",
    )
    p.add_argument("--runs", type=int, default=10_000,
                   help="detection rounds per pair in sampled mode (default: 10000)")
    p.add_argument("--eta", type=float, default=1.0, help="channel transmissivity (default: 1)")
    p.add_argument("--tau", type=float, default=1.0, help="detector efficiency (default: 1)")
    p.add_argument("--seed", type=int, default=0, help="split/generation seed (default: 0)")
    p.add_argument(
        "--sampling-seed", type=int, default=None,
        help="separate seed for sampled-mode detection rounds (default: --seed)",
    )
    p.add_argument("--split-fraction", type=float, default=0.7,
                   help="training fraction (default: 0.7)")
    p.add_argument(
        "--stratified", action=argparse.BooleanOptionalAction, default=True,
        help="stratify the split by class (default: on)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherent-knn",
        description="Simulate the coherent-state KNN pipeline and its benchmarks. "
        "Dataset files are searched in ./data or $COHERENT_KNN_DATA_DIR.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "validate-network",
        help="check single-photon output uniformity of the Walsh-Hadamard multiport",
    )
    p.add_argument("--modes", type=int, default=4, help="number of modes, a power of two")
    p.add_argument("--runs", type=int, default=100_000, help="detection samples per input port")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="report exact probabilities, no sampling")
    p.add_argument("--dump-layout", help="write the synthesized layout JSON to this path")
    _add_io_flags(p, "json")
    p.set_defaults(func=run_validate_network)

    p = sub.add_parser("curves", help="emit plot-ready sweep tables")
    p.add_argument(
        "--which", required=True,
        choices=["p0_vs_distance", "cdm_vs_manhattan", "fidelity_vs_eta", "detector_error"],
    )
    p.add_argument("--points", type=int, default=101, help="samples per sweep (default: 101)")
    p.add_argument("--n-features", type=int, default=4)
    p.add_argument("--alpha-sq-series", default="1,2,4,8",
                   help="comma-separated |alpha|^2 values for p0_vs_distance")
    p.add_argument("--beta-sq-series", default="0.5,1,2,4",
                   help="comma-separated per-mode photon numbers for fidelity_vs_eta")
    p.add_argument("--alpha-sq", type=float, default=1.0, help="detector_error |alpha|^2")
    p.add_argument("--delta", type=float, default=math.pi / 2,
                   help="detector_error phase parity (default: pi/2)")
    p.add_argument("--tau-series", default="0.9",
                   help="comma-separated detector efficiencies for detector_error")
    p.add_argument("--max-cutoff", type=int, default=10,
                   help="largest Fock cutoff for detector_error (default: 10)")
    _add_io_flags(p, "csv")
    p.set_defaults(func=run_curves)

    p = sub.add_parser("classify", help="run a full split/scale/KNN experiment")
    _add_experiment_flags(p)
    _add_io_flags(p, "json")
    p.set_defaults(func=run_classify)

    p = sub.add_parser("boundary", help="classify a 2-D grid for decision-boundary plots")
    _add_experiment_flags(p)
    p.add_argument("--grid", default="60x60", help="grid resolution WxH (default: 60x60)")
    _add_io_flags(p, "csv")
    p.set_defaults(func=run_boundary)

    p = sub.add_parser("resources", help="audit gate, photon, and register counts")
    p.add_argument("--training-points", type=int, required=True, help="training set size M")
    p.add_argument("--features", type=int, required=True, help="feature count N")
    _add_io_flags(p, "json")
    p.set_defaults(func=run_resources)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except Exception:  # noqa: BLE001 - surface internal failures as exit 4
        traceback.print_exc()
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
