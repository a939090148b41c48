"""Command-line front end.

    invsqrt spectrum --mode approx --n-range 3:20
    invsqrt wavefunction --n 2 --mode bound --out psi2.csv
    invsqrt verify all
    invsqrt figures 3 --out figdata/

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import heun_check, oracle, spectrum
from .closed_form import (PhysicalSystem, quasipoly_energy, quasipoly_psi)
from .errors import InvSqrtError

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_POINTS = 2000
DEFAULT_X_MAX = 40.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    m: float = 1.0
    hbar: float = 1.0
    V0: float = -1.0
    n_range: tuple[int, int] = (1, 3)
    x_max: float = DEFAULT_X_MAX
    points: int = DEFAULT_POINTS
    format: str = "csv"
    out_path: str | None = None

    def __post_init__(self):
        lo, hi = self.n_range
        if lo < 1 or hi < lo:
            raise UsageError(f"bad n range {lo}:{hi}")
        if self.points < 5:
            raise UsageError("--points must be at least 5")
        if not self.x_max > 0:
            raise UsageError("--x-max must be positive")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format}")

    @property
    def system(self) -> PhysicalSystem:
        try:
            return PhysicalSystem(m=self.m, hbar=self.hbar, V0=self.V0)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    @property
    def ns(self) -> range:
        return range(self.n_range[0], self.n_range[1] + 1)

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.x_max, self.points)


# ---- output ---------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def render(columns, rows, fmt, extra=None) -> str:
    """CSV with a header (17 significant digits) or the equivalent JSON."""
    if fmt == "json":
        doc = {"columns": list(columns),
               "rows": [{c: _jsonable(v) for c, v in zip(columns, r)} for r in rows]}
        if extra:
            doc.update({k: _jsonable(v) for k, v in extra.items()})
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---- spectrum -------------------------------------------------------------

SPECTRUM_COLUMNS = ("n", "a_n", "E_n", "rel_err_vs_exact")


def cmd_spectrum(cfg: RunConfig, mode: str = "exact") -> list[tuple]:
    sys_ = cfg.system
    if sys_.V0 >= 0:
        raise UsageError("the spectrum needs an attractive potential (--v0 < 0)")
    rows = []
    for n in cfg.ns:
        if mode == "quasipoly":
            rows.append((n, float(n), quasipoly_energy(sys_, n), None))
        elif mode == "exact":
            if n > spectrum.MAX_N:
                raise UsageError(f"exact roots are supported up to n = {spectrum.MAX_N}")
            a = spectrum.solve_exact_root(n)
            rows.append((n, a, spectrum.energy_from_a(sys_, a), None))
        elif mode == "approx":
            if n > spectrum.MAX_N:
                raise UsageError(f"exact roots are supported up to n = {spectrum.MAX_N}")
            exact = spectrum.energy_from_a(sys_, spectrum.solve_exact_root(n))
            E = spectrum.approx_spectrum(sys_, n)
            rows.append((n, spectrum.approx_root(n), E, abs(E - exact) / abs(exact)))
        else:
            raise UsageError(f"unknown spectrum mode {mode}")
    return rows


# ---- wavefunctions --------------------------------------------------------

def _unit_norm_quasipoly(sys_, n):
    from scipy import integrate
    val, _ = integrate.quad(lambda x: quasipoly_psi(sys_, n, x) ** 2, 0.0, np.inf,
                            epsabs=0.0, epsrel=1e-11, limit=400)
    return 1.0 / math.sqrt(val)


def cmd_wavefunction(cfg: RunConfig, n: int, mode: str = "bound", normalize: bool = False):
    """(xs, psi) on the configured grid."""
    if n < 1:
        raise UsageError("--n must be at least 1")
    sys_ = cfg.system
    xs = cfg.grid()
    if mode == "bound":
        if sys_.V0 >= 0:
            raise UsageError("bound states need --v0 < 0")
        return xs, spectrum.bound_state(sys_, n).psi(xs)
    if mode == "quasipoly":
        psi = quasipoly_psi(sys_, n, xs)
        if normalize:
            psi = psi * _unit_norm_quasipoly(sys_, n)
        return xs, psi
    raise UsageError(f"unknown wavefunction mode {mode}")


# ---- verification ---------------------------------------------------------

@dataclass
class Check:
    name: str
    measured: float
    threshold: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(math.isfinite(self.measured) and self.measured <= self.threshold)


def verify_residual(sys_: PhysicalSystem) -> list[Check]:
    out = []
    xs = np.arange(0.05, 30.0, 0.0025)
    for n in range(1, 7):
        E = quasipoly_energy(sys_, n)
        rep = oracle.residual_check(lambda x: quasipoly_psi(sys_, n, x), sys_, E, xs)
        out.append(Check(f"residual quasipoly n={n}", rep.max_rel_residual, 1e-6))
    if sys_.V0 < 0:
        xb = np.arange(0.05, 40.0, 0.0025)
        for n in range(1, 4):
            st = spectrum.bound_state(sys_, n)
            rep = oracle.residual_check(st.psi, sys_, st.E_n, xb)
            out.append(Check(f"residual bound n={n}", rep.max_rel_residual, 1e-6))
    return out


def verify_numerov(sys_: PhysicalSystem) -> list[Check]:
    out = []
    for n in range(1, 4):
        cfg = oracle.default_shooting_config(sys_, oracle.level_bracket(sys_, n), steps=20000)
        E_num = oracle.numerov_eigenvalue(sys_, cfg)
        E_ex = spectrum.energy_from_a(sys_, spectrum.solve_exact_root(n))
        out.append(Check(f"numerov n={n} |dE|/|E|", abs(E_num - E_ex) / abs(E_ex), 1e-5))
    _, ratios = oracle.numerov_refinement(sys_, oracle.level_bracket(sys_, 1))
    # fourth order means ratio 16; accept 12..20
    out.append(Check("numerov order |ratio/16 - 1|", abs(ratios[-1] / 16.0 - 1.0), 0.25))
    return out


HEUN_ENERGIES = (-0.09, -0.31, -0.77)


def verify_heun(sys_: PhysicalSystem) -> list[Check]:
    out = []
    xfit = np.linspace(0.1, 10.0, 600)
    xr = np.arange(0.05, 10.0, 0.0025)
    for E in HEUN_ENERGIES:
        for branch in (-1, 1):
            out.append(Check(f"heun fit E={E} branch={branch:+d}",
                             heun_check.route_equivalence(sys_, E, xfit, branch), 1e-6))
        worst = 0.0
        for init in ((1.0, 0.0), (0.0, 1.0)):
            rep = oracle.residual_check(lambda x: heun_check.heun_route(sys_, E, x, -1, init).values,
                                        sys_, E, xr)
            worst = max(worst, rep.max_rel_residual)
        out.append(Check(f"heun schroedinger residual E={E}", worst, 1e-6))
        p = heun_check.heun_params_from_physics(sys_, E, -1)
        zs = np.linspace(0.0, 4.5, 1801)
        traj = heun_check.integrate_tch(p, zs, (0.0, 1.0))
        out.append(Check(f"heun w-equation residual E={E}", heun_check.a3_residual(p, traj), 1e-6))
    return out


def verify_wronskian(sys_: PhysicalSystem) -> list[Check]:
    out = []
    xs = np.linspace(0.05, 20.0, 800)
    for E in (-0.05, -0.2, -0.37, -0.5):
        W = oracle.wronskian_scan(sys_, E, xs).values
        out.append(Check(f"wronskian E={E}", float(np.ptp(W) / np.max(np.abs(W))), 1e-8))
    return out


SUITES = {"residual": verify_residual, "numerov": verify_numerov,
          "heun": verify_heun, "wronskian": verify_wronskian}


def cmd_verify(cfg: RunConfig, suite: str = "all") -> list[Check]:
    sys_ = cfg.system
    names = list(SUITES) if suite == "all" else [suite]
    if suite != "all" and suite not in SUITES:
        raise UsageError(f"unknown suite {suite}")
    if sys_.V0 >= 0 and any(s == "numerov" for s in names):
        raise UsageError("the numerov suite needs --v0 < 0")
    checks = []
    for name in names:
        checks.extend(SUITES[name](sys_))
    return checks


# ---- figures --------------------------------------------------------------

def cmd_figures(cfg: RunConfig, fig: int) -> dict[str, tuple]:
    """{file stem: (columns, rows)} for one figure."""
    sys_ = cfg.system
    xs = cfg.grid()
    if fig == 1:
        cols = ["x"] + [f"psi_{n}" for n in (1, 2, 3)]
        series = [quasipoly_psi(sys_, n, xs) for n in (1, 2, 3)]
        return {"fig1": (cols, list(zip(xs, *series)))}
    if fig == 4:
        cols = ["x"] + [f"psi_{n}" for n in (1, 2, 3)]
        series = [spectrum.bound_state(sys_, n).psi(xs) for n in (1, 2, 3)]
        return {"fig4": (cols, list(zip(xs, *series)))}
    if fig == 3:
        xp = xs[1:] if xs[0] == 0 else xs
        potential = (("x", "V"), list(zip(xp, sys_.potential(xp))))
        levels = (("n", "E_n"), [(n, spectrum.approx_spectrum(sys_, n)) for n in range(1, spectrum.MAX_N + 1)])
        inset = (("n", "rel_err"), [(n, spectrum.relative_energy_error(sys_, n))
                                    for n in range(3, spectrum.MAX_N + 1)])
        return {"fig3_potential": potential, "fig3_levels": levels, "fig3_inset": inset}
    raise UsageError(f"figure {fig} is not reproduced (choose 1, 3 or 4)")


# ---- argument handling ----------------------------------------------------

def parse_range(text: str) -> tuple[int, int]:
    for sep in ("..", ":", "-"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return int(lo), int(hi)
    n = int(text)
    return n, n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--v0", type=float, default=-1.0, help="potential strength (default -1)")
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--x-max", type=float, default=DEFAULT_X_MAX)
    common.add_argument("--points", type=int, default=DEFAULT_POINTS)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (directory for figures)")

    p = _Parser(prog="invsqrt", description="Bound states of V0/sqrt(x) on the half-line.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", parents=[common], help="tabulate levels")
    s.add_argument("--mode", choices=("exact", "approx", "quasipoly"), default="exact")
    s.add_argument("--n-range", default="1:20", help="e.g. 3:20")
    s.add_argument("--n", type=int, default=None, help="single level")

    w = sub.add_parser("wavefunction", parents=[common], help="sample one wavefunction")
    w.add_argument("--mode", choices=("bound", "quasipoly"), default="bound")
    w.add_argument("--n", type=int, default=1)
    w.add_argument("--normalize", action="store_true", help="unit-normalise quasi-polynomial states")

    v = sub.add_parser("verify", parents=[common], help="run verification checks")
    v.add_argument("suite", nargs="?", default="all", choices=("residual", "numerov", "heun", "wronskian", "all"))

    f = sub.add_parser("figures", parents=[common], help="write figure data")
    f.add_argument("fig", type=int, choices=(1, 3, 4))
    return p


def _config(args, n_range=(1, 3), fmt="csv") -> RunConfig:
    return RunConfig(m=args.mass, hbar=args.hbar, V0=args.v0, n_range=n_range,
                     x_max=args.x_max, points=args.points, format=args.format or fmt,
                     out_path=args.out)


def run(args) -> int:
    if args.command == "spectrum":
        if args.n is not None:
            n_range = (args.n, args.n)
        else:
            try:
                n_range = parse_range(args.n_range)
            except ValueError as exc:
                raise UsageError(f"bad --n-range {args.n_range!r}") from exc
        cfg = _config(args, n_range)
        rows = cmd_spectrum(cfg, args.mode)
        emit(render(SPECTRUM_COLUMNS, rows, cfg.format, {"mode": args.mode}), cfg.out_path)
        return EXIT_OK

    if args.command == "wavefunction":
        cfg = _config(args)
        xs, psi = cmd_wavefunction(cfg, args.n, args.mode, args.normalize)
        emit(render(("x", "psi"), list(zip(xs, psi)), cfg.format, {"n": args.n, "mode": args.mode}),
             cfg.out_path)
        return EXIT_OK

    if args.command == "verify":
        cfg = _config(args, fmt="json")
        checks = cmd_verify(cfg, args.suite)
        rows = [(c.name, c.measured, c.threshold, c.passed) for c in checks]
        ok = all(c.passed for c in checks)
        text = render(("check", "measured", "threshold", "passed"), rows, cfg.format, {"passed": ok})
        emit(text, cfg.out_path)
        if cfg.out_path is not None:
            for c in checks:
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.measured:.3e} <= {c.threshold:.0e}")
        return EXIT_OK if ok else EXIT_VERIFY

    if args.command == "figures":
        cfg = _config(args)
        outdir = cfg.out_path or "."
        os.makedirs(outdir, exist_ok=True)
        ext = "json" if cfg.format == "json" else "csv"
        for stem, (cols, rows) in cmd_figures(cfg, args.fig).items():
            path = os.path.join(outdir, f"{stem}.{ext}")
            emit(render(cols, rows, cfg.format), path)
            print(path)
        return EXIT_OK
    raise UsageError(f"unknown command {args.command}")  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except UsageError as exc:
        print(f"invsqrt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvSqrtError, ArithmeticError, FloatingPointError) as exc:
        print(f"invsqrt: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
