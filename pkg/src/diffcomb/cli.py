"""Command-line front end.

Every run validates its inputs, computes, and only then writes its data file
plus a JSON run-manifest (config echo, versions, seeds, timing) next to it,
so a failed run leaves nothing behind.  Numeric text output carries 12
significant digits, and reruns with identical configuration produce
byte-identical data files.

Exit codes: 0 success, 2 validation or resource error, 1 internal error.
The comparison commands (verify-rs, homometry) exit 1 when their check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._util import fmt, write_json
from .combs import ModelSpec, generate_window
from .correlation import (
    analytic_autocorrelation,
    compare_autocorrelations,
    empirical_autocorrelation,
    verify_rs_recursions,
)
from .order import entropy_report, patch_complexity
from .products import product_autocorrelation, product_diffraction
from .spectra import (
    DEFAULT_SEEDS,
    analytic_diffraction,
    binned_measure,
    bragg_weight,
    periodogram,
    spectral_homometry,
)


def _load_model(text: str) -> ModelSpec:
    """Model argument: inline JSON object, path to a JSON file, or a bare model name."""
    text = text.strip()
    if text.startswith("{"):
        return ModelSpec.from_json(json.loads(text))
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        return ModelSpec.from_json(json.loads(path.read_text()))
    return ModelSpec.from_json({"model": text})


def _parse_seeds(text: str | None) -> tuple[int, ...] | None:
    """Seed list: comma-separated integers, or an inclusive range 'a:b'."""
    if text is None:
        return None
    text = text.strip()
    if ":" in text:
        lo, hi = text.split(":", 1)
        first, last = int(lo), int(hi)
        if first > last:
            raise ValueError(f"empty seed range {text!r}")
        return tuple(range(first, last + 1))
    seeds = tuple(int(part) for part in text.split(",") if part.strip())
    if not seeds:
        raise ValueError("seed list is empty")
    return seeds


def _parse_size_list(text: str) -> list[int]:
    sizes = [int(part) for part in text.split(",") if part.strip()]
    if not sizes:
        raise ValueError("size list is empty")
    return sizes


def _write_manifest(args, command: str, outputs: list[Path], seeds, started: float) -> None:
    config = {}
    for key, value in sorted(vars(args).items()):
        if key in ("func", "out"):
            continue
        config[key] = str(value) if isinstance(value, Path) else value
    manifest = {
        "schema_version": 1,
        "command": command,
        "config": config,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "seeds": list(seeds) if seeds is not None else None,
        "timing_seconds": round(time.perf_counter() - started, 6),
        "outputs": [str(path) for path in outputs],
    }
    stem = outputs[0]
    write_json(stem.with_name(stem.stem + ".manifest.json"), manifest)


# ── Handlers ────────────────────────────────────────────────────────────────

def _cmd_generate(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    window = generate_window(spec, args.first, args.last)
    out = Path(args.out)
    window.to_csv(out, args.format)
    _write_manifest(args, "generate", [out], _model_seeds(spec), started)
    print(f"wrote {len(window)} weights on [{window.first}, {window.last}] to {out}")
    return 0


def _model_seeds(*specs: ModelSpec):
    seeds = [spec.seed for spec in specs if spec.seed is not None]
    return seeds or None


def _cmd_autocorr(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    if args.analytic:
        result = analytic_autocorrelation(spec, args.M)
    else:
        result = empirical_autocorrelation(spec, args.N, args.M)
    out = Path(args.out)
    result.to_csv(out, args.format)
    _write_manifest(args, "autocorr", [out], _model_seeds(spec), started)
    tail = float(np.max(np.abs(result.eta[result.max_lag + 1 :]))) if args.M > 0 else 0.0
    print(f"eta(0) = {fmt(result.value(0))}, max |eta(m != 0)| = {fmt(tail)}; wrote {out}")
    return 0


def _cmd_diffract(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    pg = periodogram(spec, args.N, args.G)
    binned = binned_measure(pg, args.bins) if args.bins is not None else None
    out = Path(args.out)
    outputs = [out]
    pg.to_csv(out, args.format)
    if binned is not None:
        binned_path = out.with_name(out.stem + ".bins" + out.suffix)
        binned.to_csv(binned_path, args.format)
        outputs.append(binned_path)
    _write_manifest(args, "diffract", outputs, _model_seeds(spec), started)
    print(
        f"grid mean intensity = {fmt(pg.grid_mean())},"
        f" sup = {fmt(float(pg.intensities.max()))}; wrote {out}"
    )
    return 0


def _cmd_bragg(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    seeds = _parse_seeds(args.seeds)
    estimate = bragg_weight(spec, args.k0, _parse_size_list(args.N_list), seeds)
    out = Path(args.out)
    write_json(out, estimate.to_json())
    _write_manifest(args, "bragg", [out], estimate.seeds, started)
    print(
        f"weight at k = {fmt(estimate.position)}: limit {fmt(estimate.limit)}"
        f" ({estimate.growth}); wrote {out}"
    )
    return 0


def _cmd_spectrum(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    measure = analytic_diffraction(spec)
    out = Path(args.out)
    write_json(out, measure.to_json())
    _write_manifest(args, "spectrum", [out], None, started)
    point_total = sum(weight for _, weight in measure.bragg)
    print(
        f"point masses: {len(measure.bragg)} (total {fmt(point_total)}),"
        f" diffuse level {fmt(measure.ac_level)}; wrote {out}"
    )
    return 0


def _cmd_homometry(args) -> int:
    started = time.perf_counter()
    spec_a = _load_model(args.a)
    spec_b = _load_model(args.b)
    seeds = _parse_seeds(args.seeds)
    if args.mode == "autocorr":
        side_a = (
            analytic_autocorrelation(spec_a, args.M)
            if args.analytic_a
            else empirical_autocorrelation(spec_a, args.N, args.M)
        )
        side_b = (
            analytic_autocorrelation(spec_b, args.M)
            if args.analytic_b
            else empirical_autocorrelation(spec_b, args.N, args.M)
        )
        comparison = compare_autocorrelations(side_a, side_b, args.tol)
        seeds_used = _model_seeds(spec_a, spec_b)
    else:
        comparison = spectral_homometry(
            spec_a, spec_b, args.N, args.G, args.bins, args.tol,
            seeds if seeds is not None else DEFAULT_SEEDS,
        )
        seeds_used = list(seeds) if seeds is not None else list(DEFAULT_SEEDS)
    out = Path(args.out)
    report = comparison.to_json()
    report["mode"] = args.mode
    report["a"] = spec_a.to_json()
    report["b"] = spec_b.to_json()
    write_json(out, report)
    _write_manifest(args, "homometry", [out], seeds_used, started)
    verdict = "PASS" if comparison.passed else "FAIL"
    print(
        f"{verdict}: distance {fmt(comparison.distance)}"
        f" vs tolerance {fmt(comparison.tolerance)}; wrote {out}"
    )
    return 0 if comparison.passed else 1


def _cmd_entropy(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    report = entropy_report(spec, args.N, args.k, args.L_max)
    out = Path(args.out)
    write_json(out, report.to_json())
    _write_manifest(args, "entropy", [out], _model_seeds(spec), started)
    print(
        f"exact entropy {fmt(report.exact)},"
        f" block estimate {fmt(report.block_entropy_per_symbol)} (k={args.k}); wrote {out}"
    )
    return 0


def _cmd_complexity(args) -> int:
    started = time.perf_counter()
    spec = _load_model(args.model)
    result = patch_complexity(spec, args.N, args.L_max)
    out = Path(args.out)
    result.to_csv(out, args.format)
    _write_manifest(args, "complexity", [out], None, started)
    note = "all saturated" if result.all_saturated else "UNSATURATED: grow N"
    print(f"p({args.L_max}) = {result.count(args.L_max)} ({note}); wrote {out}")
    return 0


def _cmd_product(args) -> int:
    started = time.perf_counter()
    spec_a = _load_model(args.a)
    spec_b = _load_model(args.b)
    out = Path(args.out)
    if args.mode == "diffraction":
        measure = product_diffraction(analytic_diffraction(spec_a), analytic_diffraction(spec_b))
        write_json(out, measure.to_json())
        summary = f"total mass {fmt(measure.total())}"
        seeds = None
    else:
        if args.empirical:
            factor_a = empirical_autocorrelation(spec_a, args.N, args.M)
            factor_b = empirical_autocorrelation(spec_b, args.N, args.M)
        else:
            factor_a = analytic_autocorrelation(spec_a, args.M)
            factor_b = analytic_autocorrelation(spec_b, args.M)
        result = product_autocorrelation(factor_a, factor_b)
        result.to_csv(out, args.format)
        summary = f"eta(0, 0) = {fmt(result.value(0, 0))}"
        seeds = _model_seeds(spec_a, spec_b)
    _write_manifest(args, "product", [out], seeds, started)
    print(f"{summary}; wrote {out}")
    return 0


def _cmd_verify_rs(args) -> int:
    started = time.perf_counter()
    report = verify_rs_recursions(args.max)
    out = Path(args.out)
    write_json(out, report.to_json())
    _write_manifest(args, "verify-rs", [out], None, started)
    print(
        f"checked {report.checked} equations for |t| <= {report.max_index}:"
        f" {len(report.violations)} violations; wrote {out}"
    )
    return 0 if report.passed else 1


# ── Parser ─────────────────────────────────────────────────────────────────

def _add_model_argument(parser) -> None:
    parser.add_argument(
        "--model",
        required=True,
        help="model as inline JSON, a path to a JSON file, or a bare model name",
    )


def _add_format_argument(parser) -> None:
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="data file format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffcomb",
        description="Diffraction, correlation, and order metrics of binary Dirac combs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a window of model weights")
    _add_model_argument(p)
    p.add_argument("--first", type=int, default=-64, help="first lattice index")
    p.add_argument("--last", type=int, default=64, help="last lattice index")
    p.add_argument("--out", default="generate.csv")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("autocorr", help="windowed or closed-form autocorrelation")
    _add_model_argument(p)
    p.add_argument("--N", type=int, default=4096, help="window half-size")
    p.add_argument("--M", type=int, default=64, help="maximum lag")
    p.add_argument("--analytic", action="store_true", help="use the closed form")
    p.add_argument("--out", default="autocorr.csv")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_autocorr)

    p = sub.add_parser("diffract", help="periodogram on a wavenumber grid")
    _add_model_argument(p)
    p.add_argument("--N", type=int, default=4096, help="window half-size")
    p.add_argument("--G", type=int, default=4096, help="wavenumber grid size")
    p.add_argument("--bins", type=int, default=None, help="also write binned masses")
    p.add_argument("--out", default="diffract.csv")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_diffract)

    p = sub.add_parser("bragg", help="point-mass weight estimate along growing windows")
    _add_model_argument(p)
    p.add_argument("--k0", required=True, help="wavenumber in [0, 1), e.g. 0.5 or 1/2")
    p.add_argument(
        "--N-list", dest="N_list", default="1024,4096,16384",
        help="comma-separated strictly increasing window half-sizes",
    )
    p.add_argument("--seeds", default=None, help="ensemble seeds: '1,2,3' or '1:50'")
    p.add_argument("--out", default="bragg.json")
    p.set_defaults(func=_cmd_bragg)

    p = sub.add_parser("spectrum", help="closed-form spectral measure")
    _add_model_argument(p)
    p.add_argument("--out", default="spectrum.json")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("homometry", help="compare two models' correlations or spectra")
    p.add_argument("--a", required=True, help="first model (JSON, file, or name)")
    p.add_argument("--b", required=True, help="second model (JSON, file, or name)")
    p.add_argument("--mode", choices=("autocorr", "spectral"), default="autocorr")
    p.add_argument("--N", type=int, default=16384, help="window half-size")
    p.add_argument("--M", type=int, default=64, help="maximum lag (autocorr mode)")
    p.add_argument("--G", type=int, default=4096, help="grid size (spectral mode)")
    p.add_argument("--bins", type=int, default=16, help="bin count (spectral mode)")
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--analytic-a", action="store_true", help="closed form for side a")
    p.add_argument("--analytic-b", action="store_true", help="closed form for side b")
    p.add_argument("--seeds", default=None, help="ensemble seeds (spectral mode)")
    p.add_argument("--out", default="homometry.json")
    p.set_defaults(func=_cmd_homometry)

    p = sub.add_parser("entropy", help="exact entropy and block-entropy estimate")
    _add_model_argument(p)
    p.add_argument("--N", type=int, default=16384, help="window half-size")
    p.add_argument("--k", type=int, default=8, help="block length")
    p.add_argument(
        "--L-max", dest="L_max", type=int, default=None,
        help="also count subwords up to this length (deterministic models)",
    )
    p.add_argument("--out", default="entropy.json")
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("complexity", help="distinct-subword counts")
    _add_model_argument(p)
    p.add_argument("--N", type=int, default=16384, help="window half-size")
    p.add_argument("--L-max", dest="L_max", type=int, default=16)
    p.add_argument("--out", default="complexity.csv")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("product", help="two-factor product: correlation or diffraction")
    p.add_argument("--a", required=True, help="first factor model")
    p.add_argument("--b", required=True, help="second factor model")
    p.add_argument("--mode", choices=("autocorr", "diffraction"), default="autocorr")
    p.add_argument("--M", type=int, default=8, help="maximum lag per axis")
    p.add_argument("--N", type=int, default=256, help="window half-size (with --empirical)")
    p.add_argument("--empirical", action="store_true", help="estimate factors from windows")
    p.add_argument("--out", default="product.csv")
    _add_format_argument(p)
    p.set_defaults(func=_cmd_product)

    p = sub.add_parser("verify-rs", help="exact check of the Rudin-Shapiro correlation identity")
    p.add_argument("--max", type=int, default=1024, help="largest |t| to check")
    p.add_argument("--out", default="verify-rs.json")
    p.set_defaults(func=_cmd_verify_rs)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its diagnostic
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        print(f"diffcomb {args.command}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"diffcomb {args.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
