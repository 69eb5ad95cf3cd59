"""Command-line surface: region computation, sweeps, figure data, checks, simulation.

Exit codes are a stable contract: 0 success, 1 a requested check failed,
2 invalid input.  All emitted files use LF line endings and 12 significant
digits so they diff cleanly across platforms.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import becbsc as becbsc_mod
from . import dnfsim, gaussian, oracle, regions
from .channel import AuxiliaryJoint, ChannelPair, DiscreteChannel, is_more_capable, make_bec, make_bsc
from .numerics import LogBase, Tolerance

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


class _Setup:
    """Channel family, its parametric family factory, and derived constants."""

    def __init__(self, kind: str, params: list[float], base: LogBase):
        self.kind = kind
        self.base = base
        if kind == "gaussian":
            self.bc = gaussian.GaussianBC(*params)
            self.family = lambda c12: gaussian.gaussian_family(self.bc, c12, base)
            self.threshold = lambda c12: gaussian.alpha_th_closed(self.bc, c12, base)
        elif kind == "becbsc":
            self.bc = becbsc_mod.BecBscBC(*params)
            self.family = lambda c12: becbsc_mod.becbsc_family(self.bc, c12, base)
            self.threshold = lambda c12: becbsc_mod.q_threshold(self.bc, c12, base)
        else:
            raise ValueError(f"unknown channel family {kind!r} (use gaussian or becbsc)")
        self.c1 = self.bc.cap1(base)
        self.c2 = self.bc.cap2(base)

    def channel_pair(self) -> ChannelPair:
        if self.kind != "becbsc":
            raise ValueError("only the becbsc family has a discrete channel pair")
        return ChannelPair(make_bec(self.bc.tau1), make_bsc(self.bc.p2))


def _emit_boundary(path: Path, boundary, fmt: str) -> Path:
    # append rather than with_suffix: stem may contain dots (c12 values)
    if fmt == "json":
        path = path.parent / (path.name + ".json")
        _write(path, regions.boundary_to_json(boundary))
    else:
        path = path.parent / (path.name + ".csv")
        _write(path, regions.boundary_to_csv(boundary))
    return path


def cmd_region(args) -> int:
    setup = _Setup(args.family, args.params, LogBase(args.base))
    fam = setup.family(args.c12)
    a_th = setup.threshold(args.c12)
    r1_th = fam.f1(a_th)
    out = Path(args.out)
    print(f"C1 = {_fmt(setup.c1)} {args.base}")
    print(f"C2 = {_fmt(setup.c2)} {args.base}")
    print(f"alpha_th = {_fmt(a_th)}")
    print(f"r1_th = {_fmt(r1_th)} {args.base}")
    if args.which in ("inner", "both"):
        p = _emit_boundary(out / "inner", regions.inner_boundary(fam, args.grid), args.format)
        print(f"wrote {p}")
    if args.which in ("outer", "both"):
        p = _emit_boundary(out / "outer", regions.outer_boundary(fam, args.grid), args.format)
        print(f"wrote {p}")
    return EXIT_OK


def cmd_fig(args) -> int:
    which = args.command
    base = LogBase(args.base)
    if which == "fig2":
        setup = _Setup("gaussian", [5.0, 0.5], base)
        default_c12 = [0.0, 0.25, 0.5, 0.75, 1.0]
    else:
        setup = _Setup("becbsc", [0.1, 0.2], base)
        default_c12 = [0.0, 0.2, 0.4, 0.6]
    c12_list = [float(v) for v in args.c12.split(",")] if args.c12 else default_c12
    out = Path(args.out)
    diamonds = ["c12,r1,r2"]
    for c12 in c12_list:
        fam = setup.family(c12)
        boundary = regions.inner_boundary(fam, args.grid)
        p = _emit_boundary(out / f"{which}_c12_{_fmt(c12)}", boundary, args.format)
        r1_th = fam.f1(setup.threshold(c12))
        diamonds.append(f"{_fmt(c12)},{_fmt(r1_th)},{_fmt(setup.c1 - r1_th)}")
        print(f"wrote {p}")
    _write(out / "diamonds.csv", "\n".join(diamonds) + "\n")
    print(f"wrote {out / 'diamonds.csv'}")
    return EXIT_OK


def _load_pair(args) -> ChannelPair:
    if args.family == "json":
        ch1 = DiscreteChannel.from_json(Path(args.params_raw[0]).read_text())
        ch2 = DiscreteChannel.from_json(Path(args.params_raw[1]).read_text())
        return ChannelPair(ch1, ch2)
    setup = _Setup(args.family, args.params, LogBase(args.base))
    return setup.channel_pair()


def cmd_check_mc(args) -> int:
    pair = _load_pair(args)
    verdict = is_more_capable(
        pair, resolution=args.resolution, base=LogBase(args.base), tol=Tolerance(abs_tol=args.tol)
    )
    if verdict.holds:
        print(f"holds (min gap {_fmt(verdict.min_gap)} {args.base}; {verdict.note})")
        return EXIT_OK
    witness = ",".join(_fmt(v) for v in verdict.witness.probs)
    print(f"violated: gap {_fmt(verdict.min_gap)} {args.base} at P_X = [{witness}]")
    return EXIT_CHECK_FAILED


def cmd_oracle_compare(args) -> int:
    base = LogBase(args.base)
    setup = _Setup("becbsc", args.params, base)
    pair = setup.channel_pair()
    spec = oracle.GridSpec(steps=args.steps, u_cardinality=args.u_size)
    fam = setup.family(args.c12)
    t0 = time.perf_counter()
    grid_inner, grid_outer = oracle.oracle_both(pair, args.c12, spec, base, threads=args.threads)
    runtime = time.perf_counter() - t0
    param_inner = regions.inner_boundary(fam, args.grid)
    param_outer = regions.outer_boundary(fam, args.grid)
    dev_inner = oracle.frontier_deviation(grid_inner, param_inner)
    dev_outer = oracle.frontier_deviation(grid_outer, param_outer)
    out = Path(args.out)
    for name, boundary in (
        ("oracle_inner", grid_inner),
        ("oracle_outer", grid_outer),
        ("parametric_inner", param_inner),
        ("parametric_outer", param_outer),
    ):
        _emit_boundary(out / name, boundary, args.format)
    meta = {
        "u_cardinality": spec.u_cardinality,
        "steps": spec.steps,
        "evaluations": oracle.evaluation_count(pair, spec),
        "runtime_seconds": round(runtime, 3),
    }
    _write(out / "meta.json", json.dumps(meta, indent=2) + "\n")
    print(f"inner deviation = {_fmt(dev_inner)} {args.base}")
    print(f"outer deviation = {_fmt(dev_outer)} {args.base}")
    print(f"wrote frontiers and meta.json under {out}")
    if max(dev_inner, dev_outer) > args.budget:
        print(f"FAIL: deviation exceeds budget {_fmt(args.budget)}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_sweep(args) -> int:
    setup = _Setup(args.family, args.params, LogBase(args.base))
    tol = Tolerance(abs_tol=args.tol)
    if args.c12:
        grid = [float(v) for v in args.c12.split(",")]
    else:
        grid = list(np.linspace(0.0, setup.c1 - setup.c2, args.points))
    rows = regions.sweep_thresholds(setup.family, grid, tol)
    out = Path(args.out) / "thresholds.csv"
    _write(out, regions.thresholds_to_csv(rows, setup.c1))
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.family == "becbsc":
        channels = dnfsim.BecBsc(*args.params)
        if not args.input_law:
            raise ValueError("becbsc simulation requires --input-law JSON")
        law = AuxiliaryJoint.from_dict(json.loads(Path(args.input_law).read_text()))
        cfg = dnfsim.CodeConfig(
            n=args.n, r1=args.r1, r2=args.r2, c12=args.c12, seed=args.seed,
            input_law=law, codeword_budget=args.codeword_budget,
        )
    elif args.family == "gaussian":
        channels = dnfsim.Gaussian(*args.params)
        if args.power_split is None:
            raise ValueError("gaussian simulation requires --power-split")
        cfg = dnfsim.CodeConfig(
            n=args.n, r1=args.r1, r2=args.r2, c12=args.c12, seed=args.seed,
            power_split=args.power_split, codeword_budget=args.codeword_budget,
        )
    else:
        raise ValueError(f"unknown channel family {args.family!r}")
    report = dnfsim.simulate(cfg, channels, args.trials, threads=args.threads)
    out = Path(args.out)
    _write(out / "report.json", report.to_json() + "\n")
    row_file = out / "sim_sweep.csv"
    header = (
        "channel,n,r1,r2,c12,trials,seed,"
        "user1_joint_errors,user2_errors,error_events,p_e_estimate,p_e_half_width"
    )
    row = ",".join(
        [
            args.family,
            str(args.n),
            _fmt(args.r1),
            _fmt(args.r2),
            _fmt(args.c12),
            str(args.trials),
            str(args.seed),
            str(report.user1_joint_errors),
            str(report.user2_errors),
            str(report.error_events),
            _fmt(report.p_e_estimate),
            _fmt(report.p_e_half_width),
        ]
    )
    if row_file.exists():
        with open(row_file, "a", newline="\n") as fh:
            fh.write(row + "\n")
    else:
        _write(row_file, header + "\n" + row + "\n")
    print(report.to_json())
    print(f"wrote {out / 'report.json'} and appended to {row_file}")
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", choices=["bits", "nats"], default="bits")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--grid", type=int, default=2001, help="boundary sampling grid size")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coopbc",
        description="Capacity bounds and decode-and-forward simulation for "
        "cooperative broadcast channels",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", help="inner/outer boundary for one cooperation rate")
    p.add_argument("family", choices=["gaussian", "becbsc"])
    p.add_argument("params", type=float, nargs=2, help="s1 s2 (gaussian) or tau1 p2 (becbsc)")
    p.add_argument("--c12", type=float, required=True)
    p.add_argument("--which", choices=["inner", "outer", "both"], default="both")
    _add_common(p)
    p.set_defaults(func=cmd_region)

    for name in ("fig2", "fig3"):
        p = sub.add_parser(name, help=f"emit the {name} dataset (frontier per c12 + diamonds)")
        p.add_argument("--c12", default="", help="comma-separated cooperation rates")
        _add_common(p)
        p.set_defaults(func=cmd_fig)

    p = sub.add_parser("check-mc", help="scan for a violation of the channel ordering")
    p.add_argument("family", choices=["gaussian", "becbsc", "json"])
    p.add_argument(
        "params_raw", nargs=2,
        help="tau1 p2 (becbsc), s1 s2 (gaussian), or two channel-matrix JSON paths",
    )
    p.add_argument("--resolution", type=int, default=10_000)
    _add_common(p)
    p.set_defaults(func=cmd_check_mc)

    p = sub.add_parser("oracle-compare", help="grid oracle vs parametric frontiers (becbsc)")
    p.add_argument("family", choices=["becbsc"])
    p.add_argument("params", type=float, nargs=2, help="tau1 p2")
    p.add_argument("--c12", type=float, required=True)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--u-size", type=int, default=2, dest="u_size")
    p.add_argument("--budget", type=float, default=5e-3, help="max allowed frontier deviation")
    _add_common(p)
    p.set_defaults(func=cmd_oracle_compare)

    p = sub.add_parser("sweep", help="threshold table over a cooperation-rate grid")
    p.add_argument("family", choices=["gaussian", "becbsc"])
    p.add_argument("params", type=float, nargs=2)
    p.add_argument("--c12", default="", help="comma-separated grid (default: linspace)")
    p.add_argument("--points", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo run of the layered coding scheme")
    p.add_argument("--channel", choices=["becbsc", "gaussian"], required=True, dest="family")
    p.add_argument("--params", type=float, nargs=2, required=True,
                   help="tau1 p2 (becbsc) or s1 s2 (gaussian)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r1", type=float, required=True)
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--c12", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--input-law", default="", help="path to an auxiliary-joint JSON")
    p.add_argument("--power-split", type=float, default=None)
    p.add_argument("--codeword-budget", type=int, default=65536)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # check-mc takes mixed float/path positionals; resolve them here
    if args.command == "check-mc" and args.family != "json":
        try:
            args.params = [float(v) for v in args.params_raw]
        except ValueError:
            print("error: channel parameters must be numbers", file=sys.stderr)
            return EXIT_INVALID
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except regions.MonotonicityError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (oracle.BudgetExceededError, dnfsim.BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
