"""Command-line interface.

Subcommands:

* ``simulate``   — write a simulated moving-maximum series to CSV.
* ``estimate``   — estimate a (boundary-corrected) Pickands curve from a series CSV.
* ``experiment`` — run the Monte Carlo bias/variance/MSE grid to a metrics CSV.
* ``reference``  — compute a brute-force reference Pickands curve for a DGP.
* ``theory``     — tabulate limit-model quantities (A, S(t,c), variance, bias).

Exit codes: 0 success, 2 input/data error, 3 parameter error, 4 numerical
failure.  Every output file carries a provenance header with all effective
parameter values, so a run is reproducible from its output alone.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import dataio
from .blocks import BlockScheme
from .copulas import (
    Comonotone,
    CopulaSpec,
    Gaussian,
    Independence,
    Logistic,
    OuterPowerClayton,
    StudentT,
    attractor_pickands,
)
from .dgp import MovingMaxParams, simulate_moving_max
from .errors import (
    DataError,
    NumericalError,
    ParameterError,
    ReferenceMismatchError,
)
from .experiment import (
    DEFAULT_ESTIMATORS,
    PAPER_BETA,
    ExperimentConfig,
    _run_experiment_full,
    config_provenance,
    default_copulas,
    emit_metrics,
)
from .madogram import boundary_correct, default_grid, estimate_pickands_curve
from .rngs import derive_rng
from .theory import (
    LimitModel,
    asymptotic_bias,
    asymptotic_variance,
    reference_pickands_oracle,
    true_madogram,
)

COPULA_CHOICES = ("opclayton", "t4", "gaussian", "independence", "comonotone", "logistic")


def build_copula(args) -> tuple[str, CopulaSpec]:
    """Construct the innovation copula selected by --copula and its parameter flags."""
    name = args.copula
    if name == "opclayton":
        return name, OuterPowerClayton(theta=args.theta, beta=args.beta)
    if name == "t4":
        return name, StudentT(nu=args.nu, rho=args.rho if args.rho is not None else 0.494217)
    if name == "gaussian":
        return name, Gaussian(rho=args.rho if args.rho is not None else 0.5)
    if name == "independence":
        return name, Independence()
    if name == "comonotone":
        return name, Comonotone()
    if name == "logistic":
        return name, Logistic(beta=args.beta)
    raise ParameterError(f"unknown copula {name!r}")


def parse_m_values(text: str) -> tuple[int, ...]:
    """Parse --m: a scalar ("10"), a comma list ("5,10"), or a range ("2..30" or "2..30..2")."""
    text = text.strip()
    try:
        if ".." in text:
            parts = text.split("..")
            if len(parts) == 2:
                start, stop, step = int(parts[0]), int(parts[1]), 1
            elif len(parts) == 3:
                start, stop, step = (int(p) for p in parts)
            else:
                raise ValueError(text)
            if step < 1 or stop < start:
                raise ValueError(text)
            return tuple(range(start, stop + 1, step))
        if "," in text:
            return tuple(int(p) for p in text.split(","))
        return (int(text),)
    except ValueError as exc:
        raise ParameterError(
            f"cannot parse block sizes {text!r}; expected e.g. '10', '5,10', or '2..30..2'"
        ) from exc


def parse_c_values(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(p) for p in text.strip().split(","))
    except ValueError as exc:
        raise ParameterError(f"cannot parse c values {text!r}") from exc
    return values


def _add_copula_flags(
    parser: argparse.ArgumentParser, default: str | None, include_all: bool = False
) -> None:
    choices = COPULA_CHOICES + ("all",) if include_all else COPULA_CHOICES
    parser.add_argument(
        "--copula",
        choices=choices,
        default=default,
        required=default is None,
        help="innovation copula" + (f" (default: {default})" if default else ""),
    )
    parser.add_argument("--theta", type=float, default=1.0, help="outer-power Clayton theta (default 1)")
    parser.add_argument(
        "--beta",
        type=float,
        default=PAPER_BETA,
        help="outer-power / logistic beta (default log2/log1.75, tail dependence 0.25)",
    )
    parser.add_argument("--nu", type=float, default=4.0, help="t copula degrees of freedom (default 4)")
    parser.add_argument(
        "--rho",
        type=float,
        default=None,
        help="correlation for t/gaussian copulas (defaults: 0.494217 for t4, 0.5 for gaussian)",
    )


def _add_dgp_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=float, default=0.25, help="first-coordinate edge weight (default 0.25)")
    parser.add_argument("--b", type=float, default=0.5, help="second-coordinate edge weight (default 0.5)")


def _figures_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--no-figures",
        action="store_true",
        help="skip rendering PNG figures next to the CSV output",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="potmado",
        description="Weighted-madogram Pickands dependence estimation and Monte Carlo study",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="simulate a moving-maximum series to CSV")
    _add_copula_flags(p_sim, default=None)
    _add_dgp_flags(p_sim)
    p_sim.add_argument("--n", type=int, default=1000, help="series length (default 1000)")
    p_sim.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p_sim.add_argument("--out", required=True, help="output series CSV path")

    p_est = sub.add_parser("estimate", help="estimate a Pickands curve from a series CSV")
    p_est.add_argument("--input", required=True, help="input series CSV (columns x1,x2)")
    p_est.add_argument("--m", required=True, help="block size (single integer)")
    p_est.add_argument(
        "--scheme", choices=("disjoint", "sliding"), default="sliding", help="block scheme (default sliding)"
    )
    p_est.add_argument("--c", default="1.0", help="madogram weight c > 0 (default 1.0)")
    p_est.add_argument("--T", type=int, default=51, help="grid size (default 51)")
    p_est.add_argument(
        "--corrected",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="apply the additive boundary correction (default on)",
    )
    p_est.add_argument("--out", required=True, help="output curve CSV path")
    _figures_flag(p_est)

    p_exp = sub.add_parser("experiment", help="run the Monte Carlo metrics grid")
    _add_copula_flags(p_exp, default="all", include_all=True)
    _add_dgp_flags(p_exp)
    p_exp.add_argument("--n", type=int, default=1000, help="series length (default 1000)")
    p_exp.add_argument("--m", default="1..30", help="block sizes: scalar, comma list, or a..b[..step] (default 1..30)")
    p_exp.add_argument(
        "--c",
        default=None,
        help="comma list of c values; with --scheme, overrides the default estimator set",
    )
    p_exp.add_argument(
        "--scheme",
        choices=("disjoint", "sliding"),
        default=None,
        help="block scheme for --c overrides (default: the built-in estimator set)",
    )
    p_exp.add_argument("--T", type=int, default=51, help="grid size (default 51)")
    p_exp.add_argument("--N", type=int, default=1000, help="Monte Carlo iterations (default 1000)")
    p_exp.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p_exp.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    p_exp.add_argument("--out", required=True, help="output metrics CSV path")
    p_exp.add_argument(
        "--reference",
        action="append",
        default=None,
        help="reference curve CSV (repeatable; default: analytic attractor of each copula)",
    )
    p_exp.add_argument(
        "--dump-curves",
        action="store_true",
        help="also write per-(copula,scheme,c,m) mean/variance curves beside the metrics CSV",
    )
    _figures_flag(p_exp)

    p_ref = sub.add_parser("reference", help="brute-force reference Pickands curve for a DGP")
    _add_copula_flags(p_ref, default=None)
    _add_dgp_flags(p_ref)
    p_ref.add_argument("--big-m", type=int, default=10000, help="block size of the oracle blocks (default 10000)")
    p_ref.add_argument("--reps", type=int, default=100000, help="number of independent blocks (default 100000)")
    p_ref.add_argument("--T", type=int, default=51, help="grid size (default 51)")
    p_ref.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p_ref.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    p_ref.add_argument("--out", required=True, help="output reference curve CSV path")
    _figures_flag(p_ref)

    p_thy = sub.add_parser("theory", help="tabulate limit-model quantities on a t-grid")
    _add_copula_flags(p_thy, default=None)
    p_thy.add_argument("--c", default="1.0", help="madogram weight c > 0 (default 1.0)")
    p_thy.add_argument("--T", type=int, default=51, help="grid size (default 51)")
    p_thy.add_argument("--m", type=int, default=None, help="block size for the variance column")
    p_thy.add_argument("--n", type=int, default=None, help="series length for the variance column")
    p_thy.add_argument("--S-value", type=float, default=None, help="second-order scale for the bias column")
    p_thy.add_argument("--bias-rho", type=float, default=None, help="second-order index rho < 0 for the bias column")
    p_thy.add_argument("--a-m", type=float, default=None, help="second-order rate a(m) for the bias column")
    p_thy.add_argument("--out", default=None, help="output CSV path (default: print to stdout)")

    return parser


def _single_int(text, what: str) -> int:
    values = parse_m_values(str(text))
    if len(values) != 1:
        raise ParameterError(f"{what} must be a single integer, got {text!r}")
    return values[0]


def _single_float(text, what: str) -> float:
    values = parse_c_values(str(text))
    if len(values) != 1:
        raise ParameterError(f"{what} must be a single value, got {text!r}")
    return values[0]


def _workers(args) -> int:
    if args.workers is not None:
        if args.workers < 1:
            raise ParameterError(f"--workers must be >= 1, got {args.workers}")
        return args.workers
    return max(1, os.cpu_count() or 1)


def cmd_simulate(args) -> int:
    tag, spec = build_copula(args)
    params = MovingMaxParams(args.a, args.b, spec)
    if args.n < 1:
        raise ParameterError(f"--n must be >= 1, got {args.n}")
    series = simulate_moving_max(params, args.n, derive_rng(args.seed))
    provenance = {
        "command": "simulate",
        "copula": tag,
        "spec": repr(spec),
        "a": repr(args.a),
        "b": repr(args.b),
        "n": str(args.n),
        "seed": str(args.seed),
    }
    path = dataio.write_series_csv(args.out, series, provenance)
    print(f"wrote {path} ({series.n} rows)")
    return 0


def cmd_estimate(args) -> int:
    series = dataio.read_series_csv(args.input)
    m = _single_int(args.m, "--m")
    c = _single_float(args.c, "--c")
    scheme = BlockScheme(args.scheme, m)
    grid = default_grid(args.T)
    curve = estimate_pickands_curve(series, scheme, c, grid)
    if args.corrected:
        curve = boundary_correct(curve)
    provenance = {
        "command": "estimate",
        "input": str(args.input),
        "n": str(series.n),
        "T": str(args.T),
        "margin_mode": "rank",
    }
    path = dataio.write_curve_csv(args.out, curve, provenance)
    print(f"wrote {path} ({len(curve)} grid points)")
    if not args.no_figures:
        from .figures import render_curve_figure

        fig_path = render_curve_figure(
            curve, path, title=f"Pickands estimate ({args.scheme}, m={m}, c={c:g})"
        )
        print(f"wrote {fig_path}")
    return 0


def _experiment_config(args) -> ExperimentConfig:
    if args.copula == "all":
        copulas = default_copulas()
    else:
        copulas = (build_copula(args),)
    m_values = parse_m_values(args.m)
    if (args.c is None) != (args.scheme is None):
        raise ParameterError("--c and --scheme override the estimator set together; pass both")
    if args.c is not None:
        estimators = tuple((args.scheme, c) for c in parse_c_values(args.c))
    else:
        estimators = DEFAULT_ESTIMATORS
    references = None
    if args.reference:
        references = {}
        tags = {tag for tag, _ in copulas}
        for ref_path in args.reference:
            curve, prov = dataio.read_curve_csv(ref_path)
            tag = prov.get("copula")
            if tag is None:
                raise ReferenceMismatchError(f"{ref_path}: reference file lacks a copula tag")
            if tag not in tags:
                raise ReferenceMismatchError(
                    f"{ref_path}: reference is for copula {tag!r}, not part of this run"
                )
            for key, value in (("a", args.a), ("b", args.b)):
                if key not in prov or float(prov[key]) != value:
                    raise ReferenceMismatchError(
                        f"{ref_path}: reference {key}={prov.get(key)} does not match the configured {key}={value!r}"
                    )
            references[tag] = curve
        missing = sorted(tags - set(references))
        if missing:
            raise ParameterError(
                f"missing reference curve for copula(s): {', '.join(missing)}; "
                "pass one --reference per copula or none to use the analytic attractors"
            )
    return ExperimentConfig(
        n=args.n,
        m_values=m_values,
        estimators=estimators,
        copulas=copulas,
        a=args.a,
        b=args.b,
        T=args.T,
        N=args.N,
        master_seed=args.seed,
        references=references,
    )


def cmd_experiment(args) -> int:
    config = _experiment_config(args)
    records, summaries = _run_experiment_full(config, workers=_workers(args))
    provenance = {"command": "experiment"}
    provenance.update(config_provenance(config))
    if args.reference:
        provenance["reference_files"] = ";".join(str(p) for p in args.reference)
    path = dataio.write_metrics_csv(args.out, records, provenance)
    print(f"wrote {path} ({len(records)} records)")
    if args.dump_curves:
        curves_dir = Path(args.out).with_suffix("")
        curves_dir = curves_dir.parent / (curves_dir.name + "_curves")
        curves_dir.mkdir(parents=True, exist_ok=True)
        for tag, summary in summaries.items():
            for ei, (kind, c) in enumerate(config.estimators):
                for mi, m in enumerate(config.m_values):
                    cell_path = curves_dir / f"{tag}_{kind}_c{c:g}_m{m}.csv"
                    dataio.write_summary_curve_csv(
                        cell_path,
                        summary["grid"],
                        summary["mean"][ei, mi],
                        summary["variance"][ei, mi],
                        {
                            "command": "experiment",
                            "copula": tag,
                            "scheme": kind,
                            "c": repr(c),
                            "m": str(m),
                            "N": str(config.N),
                            "master_seed": str(config.master_seed),
                        },
                    )
        print(f"wrote per-cell curves under {curves_dir}")
    if not args.no_figures:
        from .figures import render_metrics_figures

        for fig_path in render_metrics_figures(records, path):
            print(f"wrote {fig_path}")
    return 0


def cmd_reference(args) -> int:
    tag, spec = build_copula(args)
    params = MovingMaxParams(args.a, args.b, spec)
    curve = reference_pickands_oracle(
        params,
        big_m=args.big_m,
        reps=args.reps,
        grid=default_grid(args.T),
        seed=args.seed,
        workers=_workers(args),
    )
    provenance = {
        "command": "reference",
        "copula": tag,
        "spec": repr(spec),
        "a": repr(args.a),
        "b": repr(args.b),
        "big_m": str(args.big_m),
        "reps": str(args.reps),
        "seed": str(args.seed),
        "T": str(args.T),
    }
    path = dataio.write_curve_csv(args.out, curve, provenance)
    print(f"wrote {path} ({len(curve)} grid points)")
    if not args.no_figures:
        from .figures import render_curve_figure

        fig_path = render_curve_figure(curve, path, title=f"Reference Pickands curve ({tag})")
        print(f"wrote {fig_path}")
    return 0


def cmd_theory(args) -> int:
    tag, spec = build_copula(args)
    c = _single_float(args.c, "--c")
    model = LimitModel(spec)
    grid = default_grid(args.T)
    a_values = np.asarray(attractor_pickands(spec, grid), dtype=float)
    s_values = np.asarray([true_madogram(model, t, c) for t in grid])
    columns = ["t", "A", "S"]
    rows = [grid, a_values, s_values]
    if (args.m is None) != (args.n is None):
        raise ParameterError("--m and --n are required together for the variance column")
    if args.m is not None:
        rows.append(np.asarray([asymptotic_variance(a, c, args.m, args.n) for a in a_values]))
        columns.append("asymptotic_variance")
    bias_params = (args.S_value, args.bias_rho, args.a_m)
    if any(p is not None for p in bias_params):
        if any(p is None for p in bias_params):
            raise ParameterError(
                "--S-value, --bias-rho and --a-m are required together for the bias column"
            )
        rows.append(
            np.asarray(
                [asymptotic_bias(args.S_value, args.bias_rho, args.a_m, a, c) for a in a_values]
            )
        )
        columns.append("asymptotic_bias")
    provenance = {
        "command": "theory",
        "copula": tag,
        "spec": repr(spec),
        "c": repr(c),
        "T": str(args.T),
    }
    lines = [f"# {k}={v}" for k, v in provenance.items()]
    lines.append(",".join(columns))
    for i in range(grid.size):
        lines.append(",".join(repr(float(col[i])) for col in rows))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(text)
        except OSError as exc:
            raise DataError(f"cannot write {args.out}: {exc}") from exc
        print(f"wrote {args.out}")
    return 0


_DISPATCH = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "experiment": cmd_experiment,
    "reference": cmd_reference,
    "theory": cmd_theory,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
