"""Command-line front end: ``leeyang <exact|predict|compare|density> [flags]``.

Exit codes: 0 success, 2 flag error, 3 range/feasibility error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from leeyang.errors import InvalidConfigurationError, NumericalError, RangeError
from leeyang.freeenergy import PhaseSystem
from leeyang.locator import (
    DEFAULT_GRID,
    DEFAULT_WINDOW,
    blume_capel_criticals,
    density_profile,
    multiple_points_json,
    predict,
)
from leeyang.models import ModelKind, ModelSpec, enumerate_sector_weights
from leeyang.polyroots import ZeroSet, default_variable, find_roots, match_zeros
from leeyang.svg import emit_svg
from leeyang.transfer import DEFAULT_DIM_CAP, extract_coefficients

DEFAULT_J = 1.0
FORMATS = ("csv", "json", "svg", "all")
J_FIG1 = math.log(16.0) / 4


def _preset_table():
    """Named parameter sets for the two figure families.

    fig1b sits just above the left critical field; its offset from the
    leading-order value -exp(-4J) is carried over to the computed one.
    """
    e4 = math.exp(-4 * J_FIG1)
    lam_minus = blume_capel_criticals(J_FIG1).lam_minus
    bc = {"model": "blume-capel", "d": 2, "L": 8, "J": J_FIG1}
    potts = {"model": "potts", "d": 3, "L": 10, "q": 25}
    return {
        "fig1a": {**bc, "lam": math.log(0.90)},
        "fig1b": {**bc, "lam": lam_minus + (math.log(0.94) + e4)},
        "fig1c": {**bc, "lam": 0.0},
        "fig1d": {**bc, "lam": math.log(1.07)},
        "fig2a": {**potts, "J": math.log(1.185 * 25) / 3},
        "fig2b": {**potts, "J": math.log(1.155 * 25) / 3},
    }


PRESETS = ("fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b")


@dataclass
class RunConfig:
    command: str
    kind: ModelKind
    d: int
    L: int | None
    V: int
    J: float
    lam: float
    q: int
    out: str
    fmt: str
    grid: tuple[int, int]
    cdelta: float
    window: tuple[float, float]
    sweep: tuple[int, ...] | None

    @property
    def model(self) -> ModelSpec:
        if self.L is None:
            raise RangeError("exact computation needs --L (lattice side)")
        return ModelSpec(self.kind, self.J, self.d, self.L, self.lam, self.q)

    @property
    def system(self) -> PhaseSystem:
        return PhaseSystem(self.kind, self.J, self.d, self.lam, self.q)

    def wants(self, fmt: str) -> bool:
        return self.fmt in (fmt, "all")


class _FlagError(Exception):
    pass


def _grid(text: str) -> tuple[int, int]:
    try:
        nr, nt = text.lower().split("x")
        out = int(nr), int(nt)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x256, got {text!r}")
    if min(out) < 2:
        raise argparse.ArgumentTypeError("grid sizes must be >= 2")
    return out


def _window(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like 0.05:20, got {text!r}")
    if not 0 < a < b:
        raise argparse.ArgumentTypeError("window needs 0 < RMIN < RMAX")
    return a, b


def _sweep(text: str) -> tuple[int, ...]:
    body = text[2:] if text.startswith("L=") else text
    try:
        vals = tuple(int(v) for v in body.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must look like L=3,4,5, got {text!r}")
    if len(vals) < 2 or min(vals) < 2:
        raise argparse.ArgumentTypeError("sweep needs at least two sizes, each >= 2")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leeyang", description="Lee-Yang zeros: exact and asymptotic.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("exact", "exact zeros from sector weights"),
        ("predict", "asymptotic zeros from metastable free energies"),
        ("compare", "match exact and predicted zeros"),
        ("density", "zero density along coexistence curves"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--model", choices=[k.value for k in ModelKind])
        p.add_argument("--d", type=int)
        p.add_argument("--L", type=int)
        p.add_argument("--V", type=int)
        p.add_argument("--J", type=float, help=f"coupling (default {DEFAULT_J})")
        p.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--q", type=int)
        p.add_argument("--out", default=".")
        p.add_argument("--format", dest="fmt", choices=FORMATS, default="all")
        p.add_argument("--preset", choices=PRESETS)
        p.add_argument("--grid", type=_grid, default=DEFAULT_GRID)
        p.add_argument("--cdelta", type=float, default=1.0)
        p.add_argument("--window", type=_window, default=DEFAULT_WINDOW)
        if name == "compare":
            p.add_argument("--sweep", type=_sweep)
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    base = _preset_table()[args.preset] if args.preset else {}

    def pick(key, default=None):
        v = getattr(args, key)
        return base.get(key, default) if v is None else v

    model = pick("model")
    if model is None:
        raise _FlagError("--model (or --preset) is required")
    kind = ModelKind(model)
    d = pick("d", 2)
    L = pick("L")
    q = pick("q", 2 if kind is ModelKind.ISING else 3)
    J = pick("J", DEFAULT_J)
    if args.V is not None:
        V = args.V
        if args.L is not None and args.L**d != V:
            raise _FlagError(f"--V {V} disagrees with --L {args.L} in d={d}")
        if args.L is None:
            L = round(V ** (1.0 / d))
            L = L if L**d == V else None
    elif L is not None:
        V = L**d
    else:
        raise _FlagError("one of --L or --V is required")
    if not J > 0:
        raise _FlagError("--J must be positive")
    if V < 1 or d < 1:
        raise _FlagError("--V and --d must be positive")
    if not args.cdelta > 0:
        raise _FlagError("--cdelta must be positive")
    if kind is ModelKind.POTTS and q < 2:
        raise _FlagError("--q must be >= 2")
    return RunConfig(
        command=args.command, kind=kind, d=d, L=L, V=V, J=J, lam=pick("lam", 0.0), q=q,
        out=args.out, fmt=args.fmt, grid=args.grid, cdelta=args.cdelta, window=args.window,
        sweep=getattr(args, "sweep", None),
    )


# -- output helpers -----------------------------------------------------------

def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit(cfg: RunConfig, name: str, text: str, written: list) -> None:
    path = os.path.join(cfg.out, name)
    write_atomic(path, text)
    written.append(path)


def _warn(msg: str) -> None:
    print(f"leeyang: warning: {msg}", file=sys.stderr)


# -- exact ---------------------------------------------------------------------

def exact_zeros(model: ModelSpec) -> ZeroSet:
    """Transfer matrix for d <= 2 within the dimension cap, enumeration otherwise."""
    dim = model.n_states ** (model.L if model.d == 2 else 1)
    if model.d <= 2 and dim <= DEFAULT_DIM_CAP:
        weights = extract_coefficients(model)
    else:
        try:
            weights = enumerate_sector_weights(model)
        except RangeError as exc:
            raise RangeError(f"{exc}; use `leeyang predict` for large volumes") from exc
    return find_roots(weights, default_variable(weights))


def cmd_exact(cfg: RunConfig) -> list[str]:
    model = cfg.model
    zs = exact_zeros(model)
    written: list[str] = []
    if cfg.wants("csv"):
        _emit(cfg, "zeros_exact.csv", zs.to_csv(), written)
    if cfg.wants("json"):
        _emit(cfg, "zeros_exact.json", zs.to_json() + "\n", written)
    if cfg.wants("svg"):
        title = f"{model.kind.value} d={model.d} L={model.L}: exact zeros ({zs.variable})"
        _emit(cfg, "exact.svg", emit_svg(exact=zs.values, title=title), written)
    if zs.variable == "u":
        dev = float(np.max(np.abs(np.abs(zs.values) - 1.0)))
        print(f"{len(zs)} zeros in u, max ||u|-1| = {dev:.3e}")
    else:
        print(f"{len(zs)} zeros in z")
    return written


# -- predict -------------------------------------------------------------------

def _check_trusted(system: PhaseSystem) -> None:
    if not system.trusted:
        _warn(f"parameters outside the trusted expansion range for {system.kind.value}; results are extrapolated")


def _curve_for_plot(c, variable):
    pts = c.z ** 2 if variable == "u" else c.z
    return pts, c.stable


def run_predict(cfg: RunConfig):
    system = cfg.system
    _check_trusted(system)
    return predict(system, cfg.V, grid=cfg.grid, window=cfg.window, c_delta=cfg.cdelta, d=cfg.d)


def cmd_predict(cfg: RunConfig) -> list[str]:
    pred = run_predict(cfg)
    written: list[str] = []
    zeros = pred.zeros
    curve_rows = [row for c in pred.curves for row in c.csv_rows()]
    if cfg.wants("csv"):
        _emit(cfg, "curves.csv", _csv(("pair", "index", "re", "im", "phase_accum", "stable"), curve_rows), written)
        _emit(cfg, "zeros_predicted.csv", zeros.to_csv(), written)
        _emit(cfg, "zeros_excluded_unstable.csv", pred.excluded_unstable.to_csv(), written)
        _emit(cfg, "zeros_excluded_multiple.csv", pred.excluded_near_multiple.to_csv(), written)
    if cfg.wants("json"):
        _emit(cfg, "zeros_predicted.json", zeros.to_json() + "\n", written)
        _emit(cfg, "curves.json", _dump({"curves": [c.to_dict() for c in pred.curves]}), written)
    if cfg.wants("json") or cfg.wants("csv"):
        _emit(cfg, "multiple_points.json", multiple_points_json(pred.multiple_points) + "\n", written)
        summary = {
            "model": cfg.kind.value, "d": cfg.d, "V": cfg.V, "J": cfg.J, "lambda": cfg.lam, "q": cfg.q,
            "extrapolated": not pred.system.trusted,
            "n_zeros": len(zeros), "n_excluded_unstable": len(pred.excluded_unstable),
            "n_excluded_multiple": len(pred.excluded_near_multiple),
            "n_curves": len(pred.curves), "n_multiple_points": len(pred.multiple_points),
            "refine_failures": pred.refine_failures,
        }
        _emit(cfg, "predict_summary.json", _dump(summary), written)
    if cfg.wants("svg"):
        title = f"{cfg.kind.value} V={cfg.V} J={cfg.J:.6g}: {len(zeros)} predicted zeros"
        svg = emit_svg([(c.z, c.stable) for c in pred.curves], predicted=zeros.values,
                       multiple_points=[m.z for m in pred.multiple_points], title=title)
        _emit(cfg, "predict.svg", svg, written)
    print(f"{len(zeros)} predicted zeros on {len(pred.curves)} curves; "
          f"{len(pred.excluded_near_multiple)} near multiple points, "
          f"{len(pred.multiple_points)} multiple points")
    return written


# -- compare -------------------------------------------------------------------

@dataclass
class Comparison:
    L: int
    exact: ZeroSet
    predicted: ZeroSet
    report: object


def compare_at(cfg: RunConfig, L: int) -> Comparison:
    model = ModelSpec(cfg.kind, cfg.J, cfg.d, L, cfg.lam, cfg.q)
    exact = exact_zeros(model)
    pred = predict(cfg.system, model.V, grid=cfg.grid, window=cfg.window, c_delta=cfg.cdelta, d=cfg.d)
    predicted = pred.in_variable()
    return Comparison(L, exact, predicted, match_zeros(exact, predicted))


def sweep_slope(Ls, max_distances) -> float | None:
    """Slope of log(max distance) against L; ``-slope`` estimates 1/L0."""
    d = np.asarray(max_distances, dtype=float)
    if len(Ls) < 2 or np.any(d <= 0):
        return None
    return float(np.polyfit(np.asarray(Ls, dtype=float), np.log(d), 1)[0])


def cmd_compare(cfg: RunConfig) -> list[str]:
    _check_trusted(cfg.system)
    Ls = cfg.sweep or (cfg.L,)
    if Ls[0] is None:
        raise RangeError("compare needs --L (or --sweep L=...)")
    results = [compare_at(cfg, L) for L in Ls]
    written: list[str] = []
    main = results[-1] if cfg.sweep else results[0]
    rep = main.report
    rows = []
    for i, j, dist in rep.pairs:
        a, b = main.exact.zeros[i].z, main.predicted.zeros[j].z
        rows.append([i, j, repr(dist), repr(a.real), repr(a.imag), repr(b.real), repr(b.imag)])
    report = {
        "model": cfg.kind.value, "d": cfg.d, "J": cfg.J, "lambda": cfg.lam, "q": cfg.q,
        "variable": main.exact.variable,
        "L": main.L, **rep.to_dict(),
    }
    if cfg.sweep:
        maxd = [r.report.max_distance for r in results]
        report["sweep"] = [{"L": r.L, "max_distance": r.report.max_distance,
                            "mean_distance": r.report.mean_distance,
                            "unmatched": len(r.report.unmatched_a) + len(r.report.unmatched_b)} for r in results]
        report["slope"] = sweep_slope(Ls, maxd)
        report["strictly_decreasing"] = bool(all(b < a for a, b in zip(maxd, maxd[1:])))
    if cfg.wants("csv"):
        _emit(cfg, "compare_pairs.csv",
              _csv(("exact_index", "predicted_index", "distance", "exact_re", "exact_im",
                    "predicted_re", "predicted_im"), rows), written)
        if cfg.sweep:
            _emit(cfg, "compare_sweep.csv",
                  _csv(("L", "max_distance", "mean_distance", "unmatched"),
                       [[s["L"], repr(s["max_distance"]), repr(s["mean_distance"]), s["unmatched"]]
                        for s in report["sweep"]]), written)
    if cfg.wants("json") or cfg.wants("csv"):
        _emit(cfg, "compare_report.json", _dump(report), written)
    if cfg.wants("svg"):
        title = f"{cfg.kind.value} L={main.L}: exact (x) vs predicted (o)"
        _emit(cfg, "compare.svg", emit_svg(exact=main.exact.values, predicted=main.predicted.values, title=title),
              written)
    print(f"max distance {rep.max_distance:.3e}, mean {rep.mean_distance:.3e}, "
          f"unmatched {len(rep.unmatched_a)}/{len(rep.unmatched_b)}")
    if cfg.sweep:
        print("sweep max distances: " + ", ".join(f"L={s['L']}: {s['max_distance']:.3e}" for s in report["sweep"]))
    return written


# -- density -------------------------------------------------------------------

def cmd_density(cfg: RunConfig) -> list[str]:
    pred = run_predict(cfg)
    rows, summary = [], []
    for ci, c in enumerate(pred.curves):
        s, rho, cum = density_profile(c)
        label = f"{c.pair[0]}-{c.pair[1]}"
        for a, r, cu in zip(s, rho, cum):
            rows.append([ci, label, repr(float(a)), repr(float(r)), repr(float(cu))])
        entry = {"curve": ci, "pair": label, "closed": c.closed, "fully_stable": c.fully_stable,
                 "integral": float(cum[-1]), "winding_count": round(c.winding / (2 * math.pi)),
                 "density_min": float(rho.min()), "density_max": float(rho.max())}
        if c.closed and c.fully_stable:
            n = entry["winding_count"]
            entry["relative_error"] = abs(cum[-1] - n) / max(n, 1)
        summary.append(entry)
    written: list[str] = []
    if cfg.wants("csv"):
        _emit(cfg, "density.csv", _csv(("curve", "pair", "arc_length", "density", "cumulative"), rows), written)
    if cfg.wants("json") or cfg.wants("csv"):
        _emit(cfg, "density.json", _dump({"V": cfg.V, "curves": summary}), written)
    if cfg.wants("svg"):
        svg = emit_svg([(c.z, c.stable) for c in pred.curves], predicted=pred.zeros.values,
                       multiple_points=[m.z for m in pred.multiple_points],
                       title=f"{cfg.kind.value} V={cfg.V}: coexistence curves")
        _emit(cfg, "density.svg", svg, written)
    for e in summary:
        print(f"curve {e['curve']} ({e['pair']}): integral {e['integral']:.9g}, winding count {e['winding_count']}")
    return written


COMMANDS = {"exact": cmd_exact, "predict": cmd_predict, "compare": cmd_compare, "density": cmd_density}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        if cfg.command == "exact":
            cfg.model  # validate before any computation
    except (_FlagError, InvalidConfigurationError) as exc:
        parser.print_usage(sys.stderr)
        print(f"leeyang: error: {exc}", file=sys.stderr)
        return 2
    except RangeError as exc:
        print(f"leeyang: range error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"leeyang: error: {exc}", file=sys.stderr)
        return 2
    try:
        COMMANDS[cfg.command](cfg)
    except RangeError as exc:
        print(f"leeyang: range error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"leeyang: numerical failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
