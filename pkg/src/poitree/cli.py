"""Command-line interface.

Subcommands: ``preprocess`` (clean a raw fix file), ``extract`` (places from
one trajectory), ``compare`` (batch method comparison), ``pl`` (entropy and
predictability ceiling of a visit sequence), and ``synth`` (generate a
synthetic trajectory with ground truth).

Exit codes: 0 on success, 1 for usage errors, 2 for data or configuration
errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path
from typing import Sequence

from . import synth as synthmod
from .baselines import sp_dbscan, sp_linkage, sp_optics
from .compare import METHODS, RunConfig, rows_to_csv, run_compare, summarize
from .extraction import extract_pois
from .predictability import predictability_limit, sequence_from_tree
from .tree import (
    GLOBAL_THRESHOLDS,
    LOCAL_THRESHOLDS,
    PoiThresholds,
    TIER_GLOBAL,
    TIER_LOCAL,
    tree_from_json,
    tree_to_geojson,
    tree_to_json,
)
from .trajectory import (
    ColumnSchema,
    DataError,
    DEFAULT_GAP_THRESHOLD_S,
    DEFAULT_MAX_ACCURACY_M,
    Trajectory,
    clean,
    load_csv,
    parse_fixes,
    save_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# config files: plain `key = value` lines, # comments

_CONFIG_KEYS: dict[str, type] = {
    "f_vd_global": float,
    "d_vd_global": float,
    "f_vd_local": float,
    "d_vd_local": float,
    "gap_threshold_s": int,
    "max_accuracy_m": float,
    "day_offset_min": int,
    "delta_s": int,
    "theta_m": float,
    "eps_m": float,
    "min_pts": int,
    "xi": float,
    "cluster_cap": int,
    "methods": str,
    "parallelism": int,
}


def _load_config(path: str | None) -> dict[str, object]:
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    out: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise DataError(f"{path}:{line_no}: expected `key = value`, got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise DataError(f"{path}:{line_no}: unknown config key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value.strip())
        except ValueError as exc:
            raise DataError(f"{path}:{line_no}: bad value for {key}: {exc}") from exc
    return out


def _pick(args: argparse.Namespace, config: dict[str, object], key: str, default: object) -> object:
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


# ---------------------------------------------------------------------------
# shared flag groups

def _add_raw_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--user-id", default=None, help="identifier stored on the trajectory (default: file stem)")
    p.add_argument("--col-time", dest="time_col", default="timestamp")
    p.add_argument("--col-lat", dest="lat_col", default="lat")
    p.add_argument("--col-lon", dest="lon_col", default="lon")
    p.add_argument("--col-acc", dest="accuracy_col", default="accuracy",
                   help="accuracy column name, or 'none' if the data has no accuracy estimate")
    p.add_argument("--gap-threshold-s", type=int, default=None,
                   help=f"silence above this opens a segment break (default {DEFAULT_GAP_THRESHOLD_S})")
    p.add_argument("--max-accuracy-m", type=float, default=None,
                   help=f"drop fixes above this accuracy radius (default {DEFAULT_MAX_ACCURACY_M:g})")
    p.add_argument("--day-offset-min", type=int, default=None,
                   help="shift of the day boundary in minutes (default 0)")


def _schema_from_args(args: argparse.Namespace) -> ColumnSchema:
    acc = args.accuracy_col
    return ColumnSchema(
        time_col=args.time_col,
        lat_col=args.lat_col,
        lon_col=args.lon_col,
        accuracy_col=None if acc is not None and acc.lower() == "none" else acc,
    )


def _load_trajectory(args: argparse.Namespace, config: dict[str, object], path: str) -> Trajectory:
    """Load one trajectory, preprocessing it unless --preprocessed."""
    user_id = args.user_id or Path(path).stem
    day_offset = int(_pick(args, config, "day_offset_min", 0))
    if getattr(args, "preprocessed", False):
        return load_csv(path, user_id=user_id, day_offset_min=day_offset)
    t, _ = parse_fixes(path, schema=_schema_from_args(args), user_id=user_id)
    t = dataclasses.replace(t, day_offset_min=day_offset)
    cleaned, _ = clean(
        t,
        gap_threshold_s=int(_pick(args, config, "gap_threshold_s", DEFAULT_GAP_THRESHOLD_S)),
        max_accuracy_m=float(_pick(args, config, "max_accuracy_m", DEFAULT_MAX_ACCURACY_M)),
    )
    return cleaned


# ---------------------------------------------------------------------------
# subcommands

def _cmd_preprocess(args: argparse.Namespace) -> int:
    t, parse_report = parse_fixes(args.input, schema=_schema_from_args(args),
                                  user_id=args.user_id or "")
    if args.day_offset_min:
        t = dataclasses.replace(t, day_offset_min=args.day_offset_min)
    cleaned, clean_report = clean(
        t,
        gap_threshold_s=args.gap_threshold_s if args.gap_threshold_s is not None else DEFAULT_GAP_THRESHOLD_S,
        max_accuracy_m=args.max_accuracy_m if args.max_accuracy_m is not None else DEFAULT_MAX_ACCURACY_M,
    )
    save_csv(cleaned, args.output)
    report = {
        "user_id": cleaned.user_id,
        "parse": dataclasses.asdict(parse_report),
        "clean": dataclasses.asdict(clean_report),
        "observation_days": cleaned.observation_days,
    }
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    print(
        f"{cleaned.user_id}: kept {len(cleaned)} fixes "
        f"({clean_report.removed_total} removed, {clean_report.segment_breaks} segment breaks) "
        f"-> {args.output}"
    )
    return EXIT_OK


def _staypoints_payload(result) -> dict:
    return {
        "staypoints": [
            {
                "lat": s.centroid.lat,
                "lon": s.centroid.lon,
                "arrival": s.arrival,
                "departure": s.departure,
                "first_index": s.first_index,
                "last_index": s.last_index,
            }
            for s in result.staypoints
        ],
        "labels": [int(x) for x in result.clusters.labels],
        "n_clusters": result.clusters.n_clusters,
    }


# Short aliases accepted anywhere a method name is: generic names for the
# four stay-point baselines.
_METHOD_ALIASES = {
    "dbscan": "sp_dbscan",
    "optics": "sp_optics",
    "db": "sp_linkage_db",
    "sc": "sp_linkage_sc",
}


def _canonical_method(name: str) -> str:
    return _METHOD_ALIASES.get(name, name)


def _cmd_extract(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    args.method = _canonical_method(args.method)
    t = _load_trajectory(args, config, args.input)
    if args.method == "tree":
        tree = extract_pois(
            t,
            global_thresholds=PoiThresholds(
                float(_pick(args, config, "f_vd_global", GLOBAL_THRESHOLDS.f_vd_min)),
                float(_pick(args, config, "d_vd_global", GLOBAL_THRESHOLDS.d_vd_min)),
            ),
            local_thresholds=PoiThresholds(
                float(_pick(args, config, "f_vd_local", LOCAL_THRESHOLDS.f_vd_min)),
                float(_pick(args, config, "d_vd_local", LOCAL_THRESHOLDS.d_vd_min)),
            ),
        )
        Path(args.output).write_text(tree_to_json(tree) + "\n")
        if args.geojson:
            Path(args.geojson).write_text(json.dumps(tree_to_geojson(tree), indent=2) + "\n")
        print(
            f"{t.user_id}: {len(tree.global_pois)} global / {len(tree.local_pois)} local places "
            f"-> {args.output}"
        )
        return EXIT_OK
    if args.geojson:
        raise DataError("--geojson is only available with --method tree")
    delta = int(_pick(args, config, "delta_s", 1800))
    theta = float(_pick(args, config, "theta_m", 50.0))
    if args.method == "sp_dbscan":
        result = sp_dbscan(
            t, delta_s=delta, theta_m=theta,
            eps_m=float(_pick(args, config, "eps_m", 50.0)),
            min_pts=_pick(args, config, "min_pts", None),
        )
    elif args.method == "sp_optics":
        result = sp_optics(
            t, delta_s=delta, theta_m=theta,
            min_pts=_pick(args, config, "min_pts", None),
            xi=float(_pick(args, config, "xi", 0.05)),
        )
    else:  # sp_linkage_db / sp_linkage_sc
        result = sp_linkage(
            t, criterion=args.method.rsplit("_", 1)[1], delta_s=delta, theta_m=theta,
            cluster_cap=_pick(args, config, "cluster_cap", None),
        )
    payload = {"user_id": t.user_id, "method": args.method, **_staypoints_payload(result)}
    Path(args.output).write_text(json.dumps(payload, indent=2) + "\n")
    print(f"{t.user_id}: {result.n_clusters} clusters from {len(result.staypoints)} staypoints -> {args.output}")
    return EXIT_OK


def _parse_sweep(spec: str) -> tuple[str, tuple[float, ...]]:
    try:
        key, _, rng = spec.partition("=")
        start_s, stop_s, count_s = rng.split(":")
        start, stop, count = float(start_s), float(stop_s), int(count_s)
    except ValueError as exc:
        raise DataError(f"bad --sweep spec {spec!r}; expected param=start:stop:count") from exc
    if count < 1:
        raise DataError("--sweep count must be >= 1")
    if count == 1:
        values = (start,)
    else:
        step = (stop - start) / (count - 1)
        values = tuple(start + i * step for i in range(count))
    return key.strip().replace("-", "_"), values


def _cmd_compare(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    methods_raw = str(_pick(args, config, "methods", "all"))
    if methods_raw == "all":
        methods = METHODS
    else:
        methods = tuple(_canonical_method(m.strip()) for m in methods_raw.split(","))
    sweep_param, sweep_values = (None, ())
    if args.sweep:
        sweep_param, sweep_values = _parse_sweep(args.sweep)
    try:
        run_config = RunConfig(
            methods=methods,
            f_vd_global=float(_pick(args, config, "f_vd_global", 0.63)),
            d_vd_global=float(_pick(args, config, "d_vd_global", 120.0)),
            f_vd_local=float(_pick(args, config, "f_vd_local", 0.13)),
            d_vd_local=float(_pick(args, config, "d_vd_local", 30.0)),
            gap_threshold_s=int(_pick(args, config, "gap_threshold_s", DEFAULT_GAP_THRESHOLD_S)),
            max_accuracy_m=float(_pick(args, config, "max_accuracy_m", DEFAULT_MAX_ACCURACY_M)),
            sp_delta_s=int(_pick(args, config, "delta_s", 1800)),
            sp_theta_m=float(_pick(args, config, "theta_m", 50.0)),
            eps_m=float(_pick(args, config, "eps_m", 50.0)),
            min_pts=_pick(args, config, "min_pts", None),
            xi=float(_pick(args, config, "xi", 0.05)),
            cluster_cap=_pick(args, config, "cluster_cap", None),
            day_offset_min=int(_pick(args, config, "day_offset_min", 0)),
            parallelism=int(_pick(args, config, "parallelism", 1)),
            sweep_param=sweep_param,
            sweep_values=sweep_values,
        )
    except ValueError as exc:
        raise DataError(str(exc)) from exc

    trajectories = [_load_trajectory(args, config, path) for path in args.input]
    rows = run_compare(trajectories, run_config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "rows.csv", "w", newline="") as fh:
        rows_to_csv(rows, fh)
    summary = summarize(rows)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _cmd_pl(args: argparse.Namespace) -> int:
    if bool(args.symbols) == bool(args.tree):
        raise DataError("pass exactly one of --symbols or --tree (with --input)")
    if args.symbols:
        try:
            lines = Path(args.symbols).read_text().splitlines()
        except OSError as exc:
            raise DataError(f"cannot read {args.symbols}: {exc}") from exc
        symbols = [line.strip() for line in lines if line.strip()]
        result = predictability_limit(symbols)
        length = len(symbols)
    else:
        if not args.input:
            raise DataError("--tree requires --input with the processed trajectory CSV")
        tree = tree_from_json(Path(args.tree).read_text())
        t = load_csv(args.input, day_offset_min=args.day_offset_min or 0)
        seq = sequence_from_tree(t, tree, tier=args.tier)
        result = predictability_limit(seq)
        length = len(seq)
    print(
        json.dumps(
            {
                "sequence_length": length,
                "alphabet_size": result.alphabet_size,
                "entropy_bits": result.entropy_bits,
                "pi_max": result.pi_max,
                "degenerate": result.degenerate,
            },
            indent=2,
        )
    )
    return EXIT_OK


def _write_raw_csv(t: Trajectory, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp", "lat", "lon", "accuracy"])
        for f in t.fixes:
            writer.writerow([f.timestamp, repr(f.lat), repr(f.lon), repr(f.accuracy)])


def _cmd_synth(args: argparse.Namespace) -> int:
    if args.list:
        names = [f"recovery-{i:02d}" for i in range(20)]
        names += [f"sweep-{i:02d}" for i in range(6)]
        names += ["timing-00"]
        print("\n".join(names))
        return EXIT_OK
    if bool(args.builtin) == bool(args.persona):
        raise DataError("pass exactly one of --builtin or --persona")
    if args.builtin:
        try:
            persona = synthmod.builtin_persona(args.builtin)
        except (KeyError, ValueError, IndexError) as exc:
            raise DataError(f"unknown built-in persona {args.builtin!r}") from exc
    else:
        try:
            persona = synthmod.persona_from_json(Path(args.persona).read_text())
        except OSError as exc:
            raise DataError(f"cannot read {args.persona}: {exc}") from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"bad persona file {args.persona}: {exc}") from exc
    result = synthmod.generate(persona, seed=args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = out_dir / persona.name
    _write_raw_csv(result.trajectory, base.with_suffix(".csv"))
    truth = {
        "persona": persona.name,
        "seed": args.seed,
        "planted": [
            {
                "name": p.name,
                "tier": p.tier,
                "parent": p.parent,
                "lat": p.center.lat,
                "lon": p.center.lon,
                "f_vd": p.f_vd,
                "d_vd": p.d_vd,
                "visit_days": p.visit_days,
                "observation_days": p.observation_days,
            }
            for p in result.planted
        ],
    }
    Path(str(base) + ".ground-truth.json").write_text(json.dumps(truth, indent=2) + "\n")
    Path(str(base) + ".persona.json").write_text(synthmod.persona_to_json(persona) + "\n")
    print(
        f"{persona.name}: {len(result.trajectory)} fixes, "
        f"{len(result.planted)} planted places -> {base}.csv"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poitree", description="Two-tier place extraction from GPS trajectories.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_pre = sub.add_parser("preprocess", help="clean a raw fix file into the processed CSV format")
    p_pre.add_argument("--input", required=True)
    p_pre.add_argument("--output", required=True)
    _add_raw_input_flags(p_pre)
    p_pre.add_argument("--report", default=None, help="write parse/clean counters as JSON here")
    p_pre.set_defaults(func=_cmd_preprocess)

    p_ext = sub.add_parser("extract", help="extract places from one trajectory")
    p_ext.add_argument("--input", required=True)
    p_ext.add_argument("--preprocessed", action="store_true",
                       help="input is a processed CSV from `poitree preprocess`")
    _add_raw_input_flags(p_ext)
    p_ext.add_argument("--method", choices=METHODS + tuple(_METHOD_ALIASES), default="tree")
    p_ext.add_argument("--output", required=True, help="output JSON path")
    p_ext.add_argument("--geojson", default=None, help="also write the tree as GeoJSON (tree method only)")
    p_ext.add_argument("--config", default=None, help="key=value parameter file")
    p_ext.add_argument("--f-vd-global", type=float, default=None)
    p_ext.add_argument("--d-vd-global", type=float, default=None)
    p_ext.add_argument("--f-vd-local", type=float, default=None)
    p_ext.add_argument("--d-vd-local", type=float, default=None)
    p_ext.add_argument("--delta-s", type=int, default=None, help="stay-point dwell threshold, seconds")
    p_ext.add_argument("--theta-m", type=float, default=None, help="stay-point radius, meters")
    p_ext.add_argument("--eps-m", type=float, default=None)
    p_ext.add_argument("--min-pts", type=int, default=None)
    p_ext.add_argument("--xi", type=float, default=None)
    p_ext.add_argument("--cluster-cap", type=int, default=None)
    p_ext.set_defaults(func=_cmd_extract)

    p_cmp = sub.add_parser("compare", help="run several methods over several users")
    p_cmp.add_argument("--input", nargs="+", required=True)
    p_cmp.add_argument("--preprocessed", action="store_true")
    _add_raw_input_flags(p_cmp)
    p_cmp.add_argument("--out-dir", required=True)
    p_cmp.add_argument("--methods", default=None, help="comma list or 'all'")
    p_cmp.add_argument("--sweep", default=None, help="param=start:stop:count, e.g. f_vd_local=0.1:0.9:9")
    p_cmp.add_argument("--parallelism", type=int, default=None)
    p_cmp.add_argument("--config", default=None)
    p_cmp.add_argument("--f-vd-global", type=float, default=None)
    p_cmp.add_argument("--d-vd-global", type=float, default=None)
    p_cmp.add_argument("--f-vd-local", type=float, default=None)
    p_cmp.add_argument("--d-vd-local", type=float, default=None)
    p_cmp.add_argument("--delta-s", type=int, default=None)
    p_cmp.add_argument("--theta-m", type=float, default=None)
    p_cmp.add_argument("--eps-m", type=float, default=None)
    p_cmp.add_argument("--min-pts", type=int, default=None)
    p_cmp.add_argument("--xi", type=float, default=None)
    p_cmp.add_argument("--cluster-cap", type=int, default=None)
    p_cmp.set_defaults(func=_cmd_compare)

    p_pl = sub.add_parser("pl", help="entropy and predictability ceiling of a visit sequence")
    p_pl.add_argument("--symbols", default=None, help="text file, one symbol per line")
    p_pl.add_argument("--tree", default=None, help="tree JSON from `poitree extract`")
    p_pl.add_argument("--input", default=None, help="processed CSV the tree was extracted from")
    p_pl.add_argument("--tier", choices=(TIER_GLOBAL, TIER_LOCAL), default=TIER_LOCAL)
    p_pl.add_argument("--day-offset-min", type=int, default=None)
    p_pl.set_defaults(func=_cmd_pl)

    p_syn = sub.add_parser("synth", help="generate a synthetic trajectory with ground truth")
    p_syn.add_argument("--builtin", default=None, help="built-in persona name, e.g. recovery-00")
    p_syn.add_argument("--persona", default=None, help="persona JSON file")
    p_syn.add_argument("--seed", type=int, default=0)
    p_syn.add_argument("--out-dir", default=".")
    p_syn.add_argument("--list", action="store_true", help="list built-in persona names")
    p_syn.set_defaults(func=_cmd_synth)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
