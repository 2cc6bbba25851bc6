"""Command-line interface.

Subcommands mirror the pipeline stages (ingest, sample, extract, select,
classify, report) plus `pipeline` to run everything. Runs are driven by a
flat key=value config file; a handful of flags override the file. Exit
codes: 0 ok, 2 configuration error, 3 data error, 4 numeric degeneracy.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, DataError, DegenerateDataError
from .pipeline import (REPORT_FORMATS, PipelineConfig, assemble_report,
                       emit_report, resolve_levels, run_pipeline,
                       stage_classify, stage_extract, stage_ingest,
                       stage_sample, stage_select)

CONFIG_TEMPLATE = """\
# data: point data.dir at a directory with one subdirectory per set
# (A..E, or the equivalent Z/O/N/F/S names), or enable synthetic data.
data.dir =
synthetic = false
synthetic.n0 = 100
synthetic.n1 = 50
synthetic.length = 4097
synthetic.burst_amplitude = 5.0
cases = Case1

# sampling
confidence = 95
z =
p = 0.5
e = 0.01
strata = 4
policy = random

# selection
selection.mode = per-fold
selection.stall_limit = 5
selection.range_threshold = 0.8

# classifier
classifier = rf
knn.k = 3
knn.standardize = true
rf.trees = 100
rf.seed =
rf.max_features = sqrt
rf.bootstrap = true
nb.var_floor = 1e-9

# cross-validation
cv.folds = 10
cv.repeats = 20
cv.stratified = true

# run
seed = 0
out = out
"""


def _to_bool(key: str, value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {value!r}")


def _to_int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _to_float(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _to_levels(key: str, value: str) -> tuple:
    return tuple(_to_int(key, part.strip()) for part in value.split(",") if part.strip())


def _to_cases(key: str, value: str) -> tuple:
    return tuple(part.strip() for part in value.split(",") if part.strip())


def _to_stall(key: str, value: str):
    if value.lower() in ("none", "unbounded"):
        return None
    return _to_int(key, value)


# config key -> (PipelineConfig field, converter); None converter keeps the string
_CONFIG_KEYS = {
    "data.dir": ("data_dir", None),
    "synthetic": ("synthetic", _to_bool),
    "synthetic.n0": ("synthetic_n0", _to_int),
    "synthetic.n1": ("synthetic_n1", _to_int),
    "synthetic.length": ("synthetic_length", _to_int),
    "synthetic.burst_amplitude": ("synthetic_burst_amplitude", _to_float),
    "cases": ("cases", _to_cases),
    "confidence": ("confidence_levels", _to_levels),
    "z": ("z", _to_float),
    "p": ("p", _to_float),
    "e": ("e", _to_float),
    "strata": ("n_strata", _to_int),
    "policy": ("policy", None),
    "selection.mode": ("selection_mode", None),
    "selection.stall_limit": ("stall_limit", _to_stall),
    "selection.range_threshold": ("range_threshold", _to_float),
    "classifier": ("classifier", None),
    "knn.k": ("knn_k", _to_int),
    "knn.standardize": ("knn_standardize", _to_bool),
    "rf.trees": ("rf_trees", _to_int),
    "rf.seed": ("rf_seed", _to_int),
    "rf.max_features": ("rf_max_features", None),
    "rf.bootstrap": ("rf_bootstrap", _to_bool),
    "nb.var_floor": ("nb_var_floor", _to_float),
    "cv.folds": ("cv_folds", _to_int),
    "cv.repeats": ("cv_repeats", _to_int),
    "cv.stratified": ("cv_stratified", _to_bool),
    "seed": ("seed", _to_int),
    "out": ("out_dir", None),
}


def parse_config_file(path) -> dict:
    """Flat `key = value` lines; # starts a comment; blank values mean unset."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    kwargs = {}
    seen = set()
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        if value == "":
            continue
        field, convert = _CONFIG_KEYS[key]
        kwargs[field] = value if convert is None else convert(key, value)
    return kwargs


def build_config(args) -> PipelineConfig:
    kwargs = parse_config_file(args.config) if args.config else {}
    if getattr(args, "data", None):
        kwargs["data_dir"] = args.data
    if getattr(args, "synthetic", False):
        kwargs["synthetic"] = True
    if getattr(args, "policy", None):
        kwargs["policy"] = args.policy
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.confidence:
        kwargs["confidence_levels"] = _to_levels("--confidence", args.confidence)
        kwargs["z"] = None
    if args.z is not None:
        kwargs["z"] = args.z
    if args.case:
        kwargs["cases"] = tuple(args.case)
    if args.classifier:
        kwargs["classifier"] = args.classifier
    if args.out:
        kwargs["out_dir"] = args.out
    try:
        return PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_init_config(args) -> int:
    target = Path(args.path)
    if target.exists():
        raise ConfigError(f"refusing to overwrite existing {target}")
    target.write_text(CONFIG_TEMPLATE)
    print(f"wrote {target}")
    return 0


def _cmd_ingest(args) -> int:
    cfg = build_config(args)
    manifest = stage_ingest(cfg)
    print(f"data root: {manifest['root']}")
    for s, count in manifest["channels_per_set"].items():
        print(f"  set {s}: {count} channels")
    return 0


def _cmd_sample(args) -> int:
    cfg = build_config(args)
    for label, z in resolve_levels(cfg):
        for case_id, sampling in stage_sample(cfg, label, z).items():
            print(f"{case_id} @ {label} (z={z:g}): n_bar={sampling['n_bar']}")
            for lab in ("0", "1"):
                print(f"  class {lab}: n_i={sampling['classes'][lab]['per_stratum']}")
    return 0


def _cmd_extract(args) -> int:
    cfg = build_config(args)
    for label, _ in resolve_levels(cfg):
        for case_id, fm in stage_extract(cfg, label).items():
            print(f"{case_id} @ {label}: {fm.n_rows} channels x {fm.n_features} features")
    return 0


def _cmd_select(args) -> int:
    cfg = build_config(args)
    for label, _ in resolve_levels(cfg):
        for case_id, subset in stage_select(cfg, label).items():
            print(f"{case_id} @ {label}: {len(subset.names)} features "
                  f"(merit {subset.merit:.4f}): {', '.join(subset.names)}")
            if subset.eliminated_by_range:
                print(f"  eliminated by range: {', '.join(subset.eliminated_by_range)}")
    return 0


def _cmd_classify(args) -> int:
    cfg = build_config(args)
    for label, _ in resolve_levels(cfg):
        for case_id, result in stage_classify(cfg, label).items():
            print(f"{case_id} @ {label} [{cfg.classifier}]: "
                  f"{result.mean:.2f} +/- {result.std:.2f} %")
    return 0


def _cmd_pipeline(args) -> int:
    cfg = build_config(args)
    report = run_pipeline(cfg)
    sys.stdout.write(emit_report(report, "table").decode())
    print(f"report written to {Path(cfg.out_dir) / 'report.json'}")
    return 0


def _cmd_report(args) -> int:
    cfg = build_config(args)
    report = assemble_report(cfg)
    sys.stdout.buffer.write(emit_report(report, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegstrata",
        description="Stratified-sampling EEG classification pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--seed", type=int, help="base seed (overrides config)")
        p.add_argument("--confidence", help="comma-separated confidence presets, e.g. 95 or 70,85,95,99")
        p.add_argument("--z", type=float, help="explicit standard normal variate instead of a preset")
        p.add_argument("--case", action="append", help="case to run (repeatable): Case1, Case2, Case3")
        p.add_argument("--classifier", choices=("rf", "nb", "knn"), help="classifier to evaluate")

    p = sub.add_parser("init-config", help="write a template config file")
    p.add_argument("path", nargs="?", default="eegstrata.conf")
    p.set_defaults(func=_cmd_init_config)

    for name, func, extra in (
        ("ingest", _cmd_ingest, True),
        ("sample", _cmd_sample, False),
        ("extract", _cmd_extract, False),
        ("select", _cmd_select, False),
        ("classify", _cmd_classify, False),
        ("pipeline", _cmd_pipeline, True),
    ):
        p = sub.add_parser(name, help=f"run the {name} stage" if name != "pipeline"
                           else "run every stage end to end")
        add_common(p)
        if extra:
            p.add_argument("--data", help="directory of per-set channel files")
            p.add_argument("--synthetic", action="store_true", help="generate synthetic channels")
            p.add_argument("--policy", choices=("random", "systematic"),
                           help="within-stratum selection policy")
        p.set_defaults(func=func)

    p = sub.add_parser("report", help="format the persisted run artifacts")
    add_common(p)
    p.add_argument("--format", choices=REPORT_FORMATS, default="table")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
