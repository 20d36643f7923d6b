"""Command-line front end.

Every analysis is a subcommand that writes JSON (default) or CSV to stdout
or ``--out``. Floats are printed with 12 significant digits so reruns with
the same seed are byte-identical. Exit status: 0 on success, 2 on usage
errors, 1 on computational errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import fock, gaussian, hardness, linops, loss, modematch
from .errors import BosonHarnessError

DEFAULT_SEED = 1234
DEFAULT_N = 20
DEFAULT_ETA = 0.96
DEFAULT_MODES = 400
THREADS_ENV = "BOSONHARNESS_THREADS"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _g(x: float) -> float:
    return float(f"{x:.12g}")


def _round(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, (float, np.floating)):
        return _g(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _parse_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _format(args) -> str:
    if args.format:
        return args.format
    if args.out and Path(args.out).suffix.lower() == ".csv":
        return "csv"
    return args.default_format


def _emit(args, payload: dict, csv_text: str | None = None, text: str | None = None) -> None:
    fmt = _format(args)
    if fmt == "csv":
        if csv_text is None:
            raise BosonHarnessError(f"{args.command} has no CSV output")
        out = csv_text
    elif fmt == "text" and text is not None:
        out = text + "\n"
    else:
        out = json.dumps(_round(payload), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def _load_matrix(path: str) -> np.ndarray:
    return linops.matrix_from_json(json.loads(Path(path).read_text()))


def _unitary(args) -> np.ndarray:
    if args.matrix:
        U = _load_matrix(args.matrix)
        return linops.check_unitary(U, args.unitary_tol)
    if args.modes is None:
        raise BosonHarnessError("give --matrix FILE or --modes N for a Haar-random network")
    return linops.haar_unitary(args.modes, args.seed)


def _input_config(args, N: int) -> tuple[int, ...]:
    if args.input:
        cfg = tuple(int(t) for t in args.input.split(","))
        if len(cfg) != N:
            raise BosonHarnessError(f"--input has {len(cfg)} modes but the network has {N}")
        return cfg
    if args.photons is None:
        raise BosonHarnessError("give --input occupations or --photons n")
    return fock.standard_input(args.photons, N)


def _dist_output(args, dist: fock.OutputDistribution) -> None:
    _emit(args, dist.to_dict(), dist.to_csv())


def _benchmark(args) -> hardness.Benchmark:
    return hardness.Benchmark(args.n_ref, args.eta_ref, mean_threshold=args.mean_threshold)


def _profile_window(args):
    if args.profile_csv:
        profile = modematch.SpectralProfile.from_csv(args.profile_csv, normalize=args.normalize)
    else:
        profile = modematch.SpectralProfile.gaussian(args.center, args.sigma)
    if args.start is not None:
        window = modematch.FilterWindow(args.start, args.width)
    else:
        window = modematch.FilterWindow.centered(args.center if args.window_center is None
                                                 else args.window_center, args.width)
    return profile, window


# subcommand handlers


def cmd_haar_unitary(args):
    U = linops.haar_unitary(args.dim, args.seed)
    _emit(args, {"dim": args.dim, "seed": args.seed, "matrix": linops.matrix_to_json(U)})


def cmd_reck_decompose(args):
    U = _unitary(args)
    seq = linops.reck_decompose(U, args.unitary_tol)
    err = float(np.linalg.norm(linops.recompose(seq) - U))
    rows = [(e.kind, "-".join(map(str, e.modes)), e.angle, e.phase) for e in seq.elements]
    _emit(
        args,
        {
            "dim": seq.dim,
            "n_beamsplitters": seq.n_beamsplitters,
            "n_phase_shifters": seq.n_phase_shifters,
            "roundtrip_error": err,
            "elements": [{"kind": e.kind, "modes": list(e.modes), "angle": e.angle, "phase": e.phase}
                         for e in seq.elements],
        },
        _csv(["kind", "modes", "angle", "phase"], rows),
    )


def cmd_permanent(args):
    A = _load_matrix(args.matrix)
    p = linops.permanent(A)
    if p.imag == 0:
        text = f"{p.real:.12g}"
    else:
        text = f"{p.real:.12g}{p.imag:+.12g}j"
    _emit(args, {"re": p.real, "im": p.imag, "size": A.shape[0]},
          _csv(["re", "im"], [(p.real, p.imag)]), text)


def cmd_distribution(args):
    U = _unitary(args)
    _dist_output(args, fock.output_distribution(U, _input_config(args, U.shape[0]), args.ceiling))


def cmd_distinguishable(args):
    U = _unitary(args)
    _dist_output(args, fock.distinguishable_distribution(U, _input_config(args, U.shape[0]), args.ceiling))


def cmd_sample(args):
    U = _unitary(args)
    cfg = _input_config(args, U.shape[0])
    if args.distinguishable:
        dist = fock.distinguishable_distribution(U, cfg, args.ceiling)
    else:
        dist = fock.output_distribution(U, cfg, args.ceiling)
    samples = fock.sample(dist, args.count, args.seed)
    _emit(
        args,
        {"modes": dist.modes, "photons": dist.photons, "seed": args.seed,
         "samples": [list(s) for s in samples]},
        _csv(["config"], [["-".join(map(str, s))] for s in samples]),
    )


def cmd_hilbert_dim(args):
    d = fock.hilbert_dimension(args.photons, args.modes)
    _emit(
        args,
        {"photons": args.photons, "modes": args.modes, "dimension": d,
         "distinguishable_parameters": fock.distinguishable_parameter_count(args.photons, args.modes)},
        _csv(["photons", "modes", "dimension"], [(args.photons, args.modes, str(d))]),
        str(d),
    )


def cmd_postselect(args):
    payload = {"eta": args.eta, "photons": args.photons,
               "probability": loss.postselect_probability(args.eta, args.photons)}
    if args.target is not None:
        payload["target"] = args.target
        payload["required_eta"] = loss.required_efficiency(args.target, args.photons)
    _emit(args, payload, _csv(list(payload), [list(payload.values())]))


def cmd_photons_required(args):
    n = loss.photons_required(args.mean, args.eta)
    payload = {"mean": args.mean, "eta": args.eta, "photons": n}
    _emit(args, payload, _csv(list(payload), [list(payload.values())]))


def cmd_apply_loss(args):
    if args.dist:
        dist = fock.OutputDistribution.from_dict(json.loads(Path(args.dist).read_text()))
    else:
        U = _unitary(args)
        dist = fock.output_distribution(U, _input_config(args, U.shape[0]), args.ceiling)
    _dist_output(args, loss.apply_loss_to_distribution(dist, args.eta))


def cmd_trace_distance(args):
    if args.single_copy is not None:
        D = gaussian.trace_distance_pure_copies(args.n, args.single_copy)
        payload = {"n": args.n, "single_copy": args.single_copy, "D": D}
    else:
        r = gaussian.trace_distance_lossy(args.n, args.eta, gaussian.SqueezedParams(args.beta, args.V))
        payload = {"n": r.n, "eta": r.eta, "beta": r.params.beta, "V": r.params.V, "D": r.distance}
    _emit(args, payload, _csv(list(payload), [list(payload.values())]))


def _curve_row(r: gaussian.DistanceResult) -> dict:
    return {"n": r.n, "eta": r.eta, "beta_opt": r.params.beta, "V_opt": r.params.V, "D_min": r.distance}


def cmd_minimize_gaussian(args):
    row = _curve_row(gaussian.minimize_distance(args.n, args.eta))
    _emit(args, row, _csv(list(row), [list(row.values())]))


def _eta_axis(args) -> list[float]:
    if args.eta_list:
        return _parse_floats(args.eta_list)
    return hardness.default_axes(eta_min=args.eta_min, eta_max=args.eta_max, eta_step=args.eta_step)[1]


def cmd_distance_curve(args):
    rows = [_curve_row(r) for r in gaussian.distance_curve(
        [int(x) for x in _parse_floats(args.n_list)], _eta_axis(args), threads=_threads())]
    header = ["n", "eta", "beta_opt", "V_opt", "D_min"]
    _emit(args, {"rows": rows}, _csv(header, [[r[k] for k in header] for r in rows]))


def cmd_hardness_region(args):
    n_axis = list(range(args.n_min, args.n_max + 1, args.n_step))
    bench = _benchmark(args)
    grid = hardness.region(n_axis, _eta_axis(args), bench, threads=_threads())
    payload = grid.to_dict()
    payload["benchmark"] = {"n_ref": bench.n_ref, "eta_ref": bench.eta_ref, "D_ref": bench.D_ref,
                            "mean_threshold": bench.mean_threshold}
    _emit(args, payload, hardness.region_to_csv(grid))


def cmd_truncation_error(args):
    p_list = _parse_floats(args.p_loss)
    if args.m is not None:
        rows = [{"m": args.m, "p_loss": p, "epsilon": hardness.truncation_error(
            hardness.TruncationSpec(args.n, args.m, p, args.modes))} for p in p_list]
    else:
        curve = hardness.truncation_curve(args.n, p_list, args.modes)
        rows = [{"m": m, "p_loss": p, "epsilon": float(eps[m])} for p, eps in curve.items()
                for m in range(args.n + 1)]
    header = ["m", "p_loss", "epsilon"]
    _emit(args, {"n": args.n, "modes": args.modes, "rows": rows},
          _csv(header, [[r[k] for k in header] for r in rows]))


def cmd_filter_loss(args):
    profile, window = _profile_window(args)
    ch = modematch.filter_to_loss(profile, window)
    payload = {"window_start": window.start, "window_width": window.width,
               "p_pass": ch.eta, "eta": ch.eta, "p_loss": ch.p_loss}
    _emit(args, payload, _csv(list(payload), [list(payload.values())]))


def cmd_loss_budget(args):
    profile, window = _profile_window(args)
    v = modematch.loss_budget_check(args.eta_phys, profile, window, args.photons, _benchmark(args))
    payload = v.to_dict()
    _emit(args, payload, _csv(list(payload), [[int(x) if isinstance(x, bool) else x for x in payload.values()]]))


# parser


def _add_output(p):
    p.add_argument("--out", help="write to this path instead of stdout")
    p.add_argument("--format", choices=["json", "csv", "text"],
                   help="default: csv for a .csv --out, else json (text for permanent)")


def _add_unitary(p):
    p.add_argument("--matrix", help="JSON file of nested [re, im] pairs")
    p.add_argument("--modes", type=int, help="draw a Haar-random unitary of this size")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--unitary-tol", type=float, default=linops.UNITARY_TOL)


def _add_input(p):
    p.add_argument("--input", help="comma-separated input occupations")
    p.add_argument("--photons", type=int, help="single photons in the first n modes")
    p.add_argument("--ceiling", type=int, default=fock.ENUMERATION_CEILING)


def _add_bench(p):
    p.add_argument("--n-ref", type=int, default=DEFAULT_N)
    p.add_argument("--eta-ref", type=float, default=DEFAULT_ETA)
    p.add_argument("--mean-threshold", type=float, help="minimum mean surviving photons; default n_ref * eta_ref")


def _add_eta_axis(p, step=0.01):
    p.add_argument("--eta-list", help="comma-separated efficiencies (overrides the range)")
    p.add_argument("--eta-min", type=float, default=0.0)
    p.add_argument("--eta-max", type=float, default=1.0)
    p.add_argument("--eta-step", type=float, default=step)


def _add_filter(p):
    p.add_argument("--profile-csv", help="two-column omega,density CSV")
    p.add_argument("--normalize", action="store_true", help="rescale a tabulated profile to unit area")
    p.add_argument("--center", type=float, default=0.0, help="Gaussian profile center")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian profile standard deviation")
    p.add_argument("--start", type=float, help="window start; default centers the window")
    p.add_argument("--window-center", type=float)
    p.add_argument("--width", type=float, required=True, help="window width")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bosonharness", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    def add(name, func, help, default_format="json"):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func, default_format=default_format)
        _add_output(p)
        return p

    p = add("haar-unitary", cmd_haar_unitary, "sample a Haar-random unitary")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("reck-decompose", cmd_reck_decompose, "decompose a unitary into beamsplitters and phases")
    _add_unitary(p)

    p = add("permanent", cmd_permanent, "permanent of a square matrix", "text")
    p.add_argument("--matrix", required=True)

    for name, func, h in [("distribution", cmd_distribution, "exact output distribution"),
                          ("distinguishable", cmd_distinguishable, "distinguishable-photon distribution")]:
        p = add(name, func, h)
        _add_unitary(p)
        _add_input(p)

    p = add("sample", cmd_sample, "sample output configurations")
    _add_unitary(p)
    _add_input(p)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--distinguishable", action="store_true")

    p = add("hilbert-dim", cmd_hilbert_dim, "number of n-photon configurations over N modes")
    p.add_argument("--photons", type=int, default=DEFAULT_N)
    p.add_argument("--modes", type=int, default=DEFAULT_MODES)

    p = add("postselect", cmd_postselect, "probability that every photon survives")
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--photons", type=int, default=DEFAULT_N)
    p.add_argument("--target", type=float, help="also report the efficiency reaching this probability")

    p = add("photons-required", cmd_photons_required, "input photons for a target post-loss mean")
    p.add_argument("--mean", type=float, default=DEFAULT_N)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)

    p = add("apply-loss", cmd_apply_loss, "apply uniform loss to a distribution")
    p.add_argument("--dist", help="distribution JSON as written by 'distribution'")
    _add_unitary(p)
    _add_input(p)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)

    p = add("trace-distance", cmd_trace_distance, "distance between lossy photons and a Gaussian surrogate")
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--beta", type=float, default=2 ** 0.5)
    p.add_argument("--V", type=float, default=1 / 3)
    p.add_argument("--single-copy", type=float, help="use the pure-copy rule with this one-copy distance")

    p = add("minimize-gaussian", cmd_minimize_gaussian, "closest Gaussian surrogate")
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)

    p = add("distance-curve", cmd_distance_curve, "minimum distance over (n, eta)")
    p.add_argument("--n-list", default="1,2,5,10,20,50")
    _add_eta_axis(p, 0.05)

    p = add("hardness-region", cmd_hardness_region, "hardness criteria over (n, eta)")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=300)
    p.add_argument("--n-step", type=int, default=1)
    _add_eta_axis(p)
    _add_bench(p)

    p = add("truncation-error", cmd_truncation_error, "error of truncating to m photons")
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--m", type=int, help="single truncation level; default: every m in 0..n")
    p.add_argument("--p-loss", default="0.1,0.3,0.5", help="comma-separated loss probabilities")
    p.add_argument("--modes", type=int, default=DEFAULT_MODES)

    p = add("filter-loss", cmd_filter_loss, "spectral filter as an equivalent loss")
    _add_filter(p)

    p = add("loss-budget", cmd_loss_budget, "hardness verdict with physical and filtering loss")
    p.add_argument("--eta-phys", type=float, default=DEFAULT_ETA)
    p.add_argument("--photons", type=int, default=DEFAULT_N)
    _add_filter(p)
    _add_bench(p)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (BosonHarnessError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"bosonharness {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
