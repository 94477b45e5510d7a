"""Command-line surface: embed, evaluate, plot, pipeline, fixtures.

Exit codes: 0 success, 1 configuration error, 2 input error, 3 numerical
failure.  Diagnostics go to stderr as one machine-parsable line; stdout is
reserved for data.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import dataset as ds
from . import fixtures as fx
from .embedding import Embedding2D, load_embedding_csv
from .errors import (
    ConfigError,
    DataError,
    IdMismatch,
    ManifoldKitError,
    MissingColumn,
    NumericalError,
)
from .geodesic import classical_mds, isomap, smacof_mds
from .neighbors import gaussian_affinity, knn_graph, pairwise_distances
from .phate import phate_embed
from .plotting import PlotSpec, render_scatter_svg
from .quality import quality_report
from .spectral import laplacian_eigenmaps, lle
from .tsne import TsneConfig, calibrate_perplexity, tsne_embed

ALGORITHMS = (
    "laplacian_eigenmaps",
    "lle",
    "isomap",
    "classical_mds",
    "smacof",
    "tsne",
    "phate",
)

# per-algorithm defaults for parameters the user left unset
DEFAULTS = {
    "k": {"phate": 5, "default": 10},
    "sigma": None,        # median heuristic when unset
    "perplexity": 30.0,
    "alpha": 40.0,
    "t": None,            # entropy-knee selection when unset
    "dim": 2,
    "iters": {"smacof": 300, "tsne": 1000, "phate": 300, "default": 300},
    "eps": 1e-6,
    "metric": "euclidean",
    "reg": 1e-3,
}


def thread_cap() -> int:
    """Worker cap from MANIFOLD_THREADS; results never depend on it."""
    raw = os.environ.get("MANIFOLD_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"MANIFOLD_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"MANIFOLD_THREADS must be >= 1, got {value}")
    return value


def _default(name: str, algo: str):
    entry = DEFAULTS[name]
    if isinstance(entry, dict):
        return entry.get(algo, entry["default"])
    return entry


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _median_sigma(D) -> float:
    off = D.values[np.triu_indices(D.n, 1)]
    positive = off[off > 0]
    if positive.size == 0:
        return 1.0
    return float(np.median(positive))


def run_algorithm(algo: str, X: ds.EmbeddingMatrix, params: dict, seed: int) -> Embedding2D:
    """Dispatch one embedding algorithm with fully resolved parameters."""
    m = params["dim"]
    metric = params["metric"]
    if algo == "laplacian_eigenmaps":
        D = pairwise_distances(X, metric)
        graph = knn_graph(D, params["k"])
        sigma = params["sigma"] if params["sigma"] is not None else _median_sigma(D)
        params["sigma"] = sigma
        result = laplacian_eigenmaps(gaussian_affinity(D, sigma, sparsify=graph), m)
    elif algo == "lle":
        result = lle(X, k=params["k"], m=m, reg=params["reg"])
    elif algo == "isomap":
        result = isomap(X, k=params["k"], m=m)
    elif algo == "classical_mds":
        result = classical_mds(pairwise_distances(X, metric), m)
    elif algo == "smacof":
        result = smacof_mds(pairwise_distances(X, metric), m=m,
                            max_iter=params["iters"], eps=params["eps"], seed=seed)
    elif algo == "tsne":
        cfg = TsneConfig(perplexity=params["perplexity"], m=m,
                         max_iter=params["iters"], seed=seed)
        result = tsne_embed(calibrate_perplexity(pairwise_distances(X, metric),
                                                 params["perplexity"]), cfg)
    elif algo == "phate":
        result = phate_embed(X, k=params["k"], alpha=params["alpha"], m=m,
                             t=params["t"], seed=seed, mds_max_iter=params["iters"])
    else:
        raise ConfigError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    return Embedding2D(coords=result.coords, algorithm=algo, params=dict(params),
                       seed=seed, sample_ids=X.sample_ids, extras=result.extras)


def resolve_params(algo: str, args_params: dict) -> dict:
    params = {}
    for name in ("k", "sigma", "perplexity", "alpha", "t", "dim", "iters", "eps",
                 "metric", "reg"):
        supplied = args_params.get(name)
        params[name] = supplied if supplied is not None else _default(name, algo)
    return params


def cmd_embed(args) -> int:
    if args.algo not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {args.algo!r}; choose from {ALGORITHMS}")
    threads = thread_cap()
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    X = ds.load_embeddings(args.input, args.format)
    inputs = {str(args.input): _sha256(args.input)}
    if args.annotations:
        ann = ds.load_annotations(args.annotations)
        label = args.label or _first_label_column(ann)
        joined = ds.join(X, ann, label)
        if joined.n_dropped:
            print(f"warning: dropped {joined.n_dropped} ids outside the intersection",
                  file=sys.stderr)
        X = joined.embeddings
        inputs[str(args.annotations)] = _sha256(args.annotations)

    params = resolve_params(args.algo, vars(args))
    start = time.monotonic()
    emb = run_algorithm(args.algo, X, params, args.seed)
    elapsed = time.monotonic() - start

    csv_path = out_dir / f"{args.algo}.csv"
    emb.save_csv(csv_path)
    manifest = {
        "algorithm": args.algo,
        "params": {k: v for k, v in emb.params.items()},
        "seed": args.seed,
        "threads": threads,
        "inputs": inputs,
        "outputs": [csv_path.name],
        "wall_time_s": elapsed,
    }
    (out_dir / f"{args.algo}.manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(str(csv_path))
    return 0


def _first_label_column(ann: ds.AnnotationTable) -> str:
    return next(iter(ann.columns))


def cmd_evaluate(args) -> int:
    emb = load_embedding_csv(args.embedding)
    ann = ds.load_annotations(args.annotations)
    if args.label not in ann.columns:
        raise ConfigError(f"annotation file has no column {args.label!r}")
    ann_ids = set(ann.sample_ids)
    missing = [sid for sid in emb.sample_ids if sid not in ann_ids]
    if missing:
        raise IdMismatch(f"{len(missing)} embedding ids missing from annotations, "
                         f"e.g. {missing[:3]}")
    X = ds.load_embeddings(args.input, args.input_format)
    x_ids = set(X.sample_ids)
    missing = [sid for sid in emb.sample_ids if sid not in x_ids]
    if missing:
        raise IdMismatch(f"{len(missing)} embedding ids missing from input matrix, "
                         f"e.g. {missing[:3]}")
    x_index = {sid: i for i, sid in enumerate(X.sample_ids)}
    rows = [x_index[sid] for sid in emb.sample_ids]
    Xv = X.values[rows]
    labels = ann.subset(list(emb.sample_ids)).column(args.label)

    report = quality_report(Xv, emb, np.asarray(labels), k=args.k, label_column=args.label)
    out_base = Path(args.out) if args.out else Path(args.embedding).with_suffix("")
    json_path = Path(f"{out_base}.quality.json")
    text_path = Path(f"{out_base}.quality.txt")
    json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    text_path.write_text(report.to_text() + "\n", encoding="utf-8")
    print(str(json_path))
    return 0


def cmd_plot(args) -> int:
    emb = load_embedding_csv(args.embedding)
    ann = ds.load_annotations(args.annotations)
    if args.color_by not in ann.columns:
        raise ConfigError(f"annotation file has no column {args.color_by!r}")
    ann_ids = set(ann.sample_ids)
    missing = [sid for sid in emb.sample_ids if sid not in ann_ids]
    if missing:
        raise IdMismatch(f"{len(missing)} embedding ids missing from annotations, "
                         f"e.g. {missing[:3]}")
    labels = ann.subset(list(emb.sample_ids)).column(args.color_by)
    spec = PlotSpec(color_by=args.color_by, width=args.width, height=args.height,
                    point_radius=args.radius, legend=not args.no_legend)
    svg = render_scatter_svg(emb, labels, spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg, encoding="utf-8")
    print(str(out))
    return 0


def _load_pipeline_config(path: Path) -> dict:
    if not path.is_file():
        raise ConfigError(f"{path}: no such config file")
    try:
        if path.suffix == ".json":
            return json.loads(path.read_text(encoding="utf-8"))
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"{path}: parse error: {e}") from e


def cmd_pipeline(args) -> int:
    cfg = _load_pipeline_config(Path(args.config))
    for key in ("input", "out_dir"):
        if key not in cfg:
            raise ConfigError(f"pipeline config missing {key!r}")
    seed = int(cfg.get("seed", 0))
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    algorithms = cfg.get("algorithms", list(ALGORITHMS))
    for algo in algorithms:
        if algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {algo!r} in config")

    input_cfg = cfg["input"]
    X = ds.load_embeddings(input_cfg["embeddings"], input_cfg.get("format", "csv"))
    ann = ds.load_annotations(input_cfg["annotations"])
    label_column = cfg.get("label_column") or _first_label_column(ann)

    merge_cfg = cfg.get("merge")
    if merge_cfg:
        ann = ds.merge_categories(ann, merge_cfg["column"], dict(merge_cfg["mapping"]))

    joined = ds.join(X, ann, label_column)
    if joined.n_dropped:
        print(f"warning: dropped {joined.n_dropped} ids outside the intersection",
              file=sys.stderr)
    labels = np.asarray(joined.labels)
    label_set = sorted(set(joined.labels))
    eval_k = int(cfg.get("evaluate", {}).get("k", 10))
    user_params = cfg.get("params", {})

    summary_rows = []
    for algo in algorithms:
        params = resolve_params(algo, user_params)
        start = time.monotonic()
        emb = run_algorithm(algo, joined.embeddings, params, seed)
        elapsed = time.monotonic() - start
        csv_path = out_dir / f"{algo}.csv"
        emb.save_csv(csv_path)
        manifest = {
            "algorithm": algo,
            "params": dict(emb.params),
            "seed": seed,
            "threads": thread_cap(),
            "inputs": {
                str(input_cfg["embeddings"]): _sha256(input_cfg["embeddings"]),
                str(input_cfg["annotations"]): _sha256(input_cfg["annotations"]),
            },
            "outputs": [csv_path.name],
            "wall_time_s": elapsed,
        }
        (out_dir / f"{algo}.manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

        report = quality_report(joined.embeddings.values, emb, labels, k=eval_k,
                                label_column=label_column)
        (out_dir / f"{algo}.quality.json").write_text(report.to_json() + "\n", encoding="utf-8")
        (out_dir / f"{algo}.quality.txt").write_text(report.to_text() + "\n", encoding="utf-8")

        svg = render_scatter_svg(emb, joined.labels, PlotSpec(color_by=label_column))
        (out_dir / f"{algo}.svg").write_text(svg, encoding="utf-8")
        summary_rows.append((algo, report))

    summary = _format_summary(label_column, label_set, eval_k, seed, summary_rows)
    (out_dir / "summary.txt").write_text(summary, encoding="utf-8")
    print(str(out_dir / "summary.txt"))
    return 0


def _format_summary(label_column, label_set, k, seed, rows) -> str:
    lines = [
        f"labels ({len(label_set)}): {', '.join(label_set)}",
        f"label_column: {label_column}   k: {k}   seed: {seed}",
        "",
        f"{'algorithm':<20} {'trustworthiness':>16} {'continuity':>12} "
        f"{'knn_agreement':>14} {'silhouette':>11}",
    ]
    for algo, r in rows:
        lines.append(
            f"{algo:<20} {r.trustworthiness:>16.6f} {r.continuity:>12.6f} "
            f"{r.knn_label_agreement:>14.6f} {r.silhouette:>11.6f}"
        )
    return "\n".join(lines) + "\n"


def cmd_fixtures(args) -> int:
    if args.fixtures_command != "generate":
        raise ConfigError("usage: fixtures generate --spec <name> --n <n> --seed <u64> --out <dir>")
    spec = fx.SyntheticSpec(generator=args.spec, n=args.n, noise=args.noise, seed=args.seed)
    result = fx.generate(spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    ds.save_embeddings(result.dataset.embeddings, out_dir / "embeddings.csv", "csv")
    ann = result.dataset.annotations
    with open(out_dir / "annotations.csv", "w", newline="", encoding="utf-8") as fh:
        fh.write("id,label\n")
        for sid, lab in zip(ann.sample_ids, ann.column("label")):
            fh.write(f"{sid},{lab}\n")
    with open(out_dir / "ground_truth.csv", "w", newline="", encoding="utf-8") as fh:
        width = result.ground_truth.shape[1]
        fh.write("id," + ",".join(f"g{j + 1}" for j in range(width)) + "\n")
        for sid, row in zip(ann.sample_ids, result.ground_truth):
            fh.write(sid + "," + ",".join(repr(float(v)) for v in row) + "\n")
    print(str(out_dir))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="manifoldkit",
                                     description="Manifold-learning embeddings, quality "
                                                 "metrics, and deterministic scatter plots.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_embed = sub.add_parser("embed", help="compute a 2-D embedding")
    p_embed.add_argument("--algo", required=True)
    p_embed.add_argument("--input", required=True)
    p_embed.add_argument("--format", default="csv", choices=["csv", "binary-f64"])
    p_embed.add_argument("--annotations")
    p_embed.add_argument("--label")
    p_embed.add_argument("--out", required=True)
    p_embed.add_argument("--seed", type=int, default=0)
    p_embed.add_argument("--k", type=int)
    p_embed.add_argument("--sigma", type=float)
    p_embed.add_argument("--perplexity", type=float)
    p_embed.add_argument("--alpha", type=float)
    p_embed.add_argument("--t", type=int)
    p_embed.add_argument("--dim", type=int)
    p_embed.add_argument("--iters", type=int)
    p_embed.add_argument("--eps", type=float)
    p_embed.add_argument("--metric", choices=["euclidean", "cosine"])
    p_embed.add_argument("--reg", type=float)
    p_embed.set_defaults(func=cmd_embed)

    p_eval = sub.add_parser("evaluate", help="score an embedding against its inputs")
    p_eval.add_argument("--embedding", required=True)
    p_eval.add_argument("--input", required=True, help="high-dimensional input matrix")
    p_eval.add_argument("--input-format", default="csv", choices=["csv", "binary-f64"])
    p_eval.add_argument("--annotations", required=True)
    p_eval.add_argument("--label", required=True)
    p_eval.add_argument("--k", type=int, default=10)
    p_eval.add_argument("--out", help="output basename (default: alongside the embedding)")
    p_eval.set_defaults(func=cmd_evaluate)

    p_plot = sub.add_parser("plot", help="emit a deterministic SVG scatter plot")
    p_plot.add_argument("--embedding", required=True)
    p_plot.add_argument("--annotations", required=True)
    p_plot.add_argument("--color-by", required=True, dest="color_by")
    p_plot.add_argument("--out", required=True)
    p_plot.add_argument("--width", type=int, default=800)
    p_plot.add_argument("--height", type=int, default=600)
    p_plot.add_argument("--radius", type=float, default=3.0)
    p_plot.add_argument("--no-legend", action="store_true")
    p_plot.set_defaults(func=cmd_plot)

    p_pipe = sub.add_parser("pipeline", help="merge, embed, evaluate, and plot per config")
    p_pipe.add_argument("--config", required=True)
    p_pipe.set_defaults(func=cmd_pipeline)

    p_fix = sub.add_parser("fixtures", help="synthetic dataset generation")
    fix_sub = p_fix.add_subparsers(dest="fixtures_command", required=True)
    p_gen = fix_sub.add_parser("generate")
    p_gen.add_argument("--spec", required=True, choices=list(fx.GENERATORS))
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--noise", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_fixtures)

    return parser


def _error_reason(e: ManifoldKitError) -> str:
    msg = str(e)
    name = type(e).__name__
    return msg if msg.startswith(name) else f"{name}: {msg}"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ManifoldKitError as e:
        print(f"error: {_error_reason(e)}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
