"""Command line entry point ``b2p1``."""
from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from .errors import B2P1Error, ConfigError, InvalidParameter
from .params import Regime

SUBCOMMANDS = ("simulate", "residual", "perturb", "reduce-check", "soliton-demo", "potential",
               "derive", "sweep")


# -- helpers ---------------------------------------------------------------------

def _config(args, required=True):
    if args.config is None:
        if required:
            raise ConfigError("this subcommand needs --config PATH")
        return None
    cfg = io.load_config(args.config)
    over = {}
    if args.case is not None:
        over["regime__case"] = args.case
    if args.formulation is not None:
        over["regime__formulation"] = args.formulation
    if args.form is not None:
        over["regime__form"] = args.form
    if over:
        cfg = cfg.with_overrides(**over)
        cfg.regime  # validate
    for w in cfg.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return cfg


def _outdir(args, cfg) -> Path:
    d = Path(args.out if args.out else (cfg["output"]["dir"] if cfg else "out"))
    d.mkdir(parents=True, exist_ok=True)
    return d


def _form(args, cfg):
    if args.form:
        return args.form
    return cfg["regime"]["form"] if cfg else "consistent"


def initial_fields(cfg, grid, p, seed=None):
    """(eta, f, q) from the [initial] section; q is f_t at zeroth order."""
    from .cascade import PlaneWaveSpec, WaveComponent, zeroth_field
    from .reduction import soliton_profile, soliton_width

    ini = cfg["initial"]
    X, Y = grid.mesh()
    kind = ini["kind"]
    if kind == "rest":
        eta, f = grid.zeros(), grid.zeros()
    elif kind == "gaussian":
        dx = X - ini["x0"] * grid.Lx
        dy = Y - ini["y0"] * grid.Ly
        eta = ini["amp"] * np.exp(-(dx * dx + dy * dy) / ini["width"] ** 2)
        f = grid.zeros()
    elif kind == "plane-wave":
        comps = tuple(WaveComponent(*m) for m in ini["modes"])
        hf = zeroth_field(PlaneWaveSpec(comps, grid.Lx, grid.Ly, p.ratio), grid)
        f = hf.evaluate(grid, 0.0)
        eta = -hf.evaluate(grid, 0.0, c=1)
    elif kind == "soliton-line":
        soliton_width(ini["amp"], p)  # validates alpha*amp > 0
        eta1 = soliton_profile(grid.x, ini["amp"], p, ini["x0"] * grid.Lx, grid.Lx)
        eta = np.broadcast_to(eta1, grid.shape).copy()
        # zeroth-order right-going data: f_x = eta - mean
        wh = grid.fft(eta)
        wh[0, 0] = 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            fh = np.where(grid.kx[None, :] != 0, wh / (1j * grid.kx[None, :]), 0.0)
        f = grid.ifft(fh)
    else:  # file
        eta, f, meta = io.read_snapshot(Path(ini["path"]).read_bytes())
        if (meta["ny"], meta["nx"]) != grid.shape:
            raise ConfigError(f"snapshot grid {meta['nx']}x{meta['ny']} does not match [grid]",
                              cfg.lines.get(("initial", "path")), "path")
    if ini["noise"]:
        rng = np.random.default_rng(seed)
        eta = eta + grid.dealias(ini["noise"] * rng.standard_normal(grid.shape))
    return eta, f, -eta


def _time(cfg, grid):
    from .dynamics import StepperConfig, cfl_dt

    t = cfg["time"]
    dt = t["dt"] if t["dt"] else cfl_dt(grid, t["courant"])
    nsteps = max(0, int(round(t["t_end"] / dt)))
    return StepperConfig(dt=dt, filter=t["filter"] or None, picard_tol=t["picard_tol"]), nsteps


# -- subcommands -------------------------------------------------------------------

def cmd_simulate(args):
    from .dynamics import PairModel, WaveState, diagnostics, step_rk4
    from .scalar import ScalarModel, ScalarState, eta_from_f, scalar_step

    cfg = _config(args)
    out = _outdir(args, cfg)
    g, p, r = cfg.grid, cfg.params, cfg.regime
    form = _form(args, cfg)
    step_cfg, nsteps = _time(cfg, g)
    eta, f, q = initial_fields(cfg, g, p, args.seed)
    bath = cfg.bathymetry
    scalar = cfg["regime"]["formulation"] == "scalar"
    if scalar:
        model = ScalarModel(g, bath, p, r, form=form)
        state = ScalarState(f, q, 0.0, g)

        def advance(s):
            return scalar_step(s, step_cfg, model=model)

        def surface(s):
            return eta_from_f(s, p, r, form)
    else:
        model = PairModel(g, bath, p, r, st_mode=cfg["regime"]["st_mode"], form=form,
                          picard_tol=step_cfg.picard_tol)
        state = WaveState(eta, f, 0.0, g)

        def advance(s):
            return step_rk4(s, step_cfg, model=model)

        def surface(s):
            return s.eta

    every = cfg["time"]["snapshot_every"]
    rows = []

    def record(n, s):
        e = surface(s)
        view = WaveState(e, s.f, s.t, g)
        d = diagnostics(view)
        rows.append((s.t, d["mass"], d["l2_eta"], d["linf_eta"], d["spectrum_tail_fraction"]))
        if cfg["output"]["snapshots"] and every and n % every == 0:
            io.save_snapshot(out / f"snap_{n:06d}.b2p1", view)

    record(0, state)
    for n in range(1, nsteps + 1):
        state = advance(state)
        record(n, state)
    if cfg["output"]["csv"]:
        io.write_csv(out / "diagnostics.csv", ("t", "mass", "l2_eta", "linf_eta", "tail_fraction"),
                     rows)
    print(f"simulate: {nsteps} steps to t={state.t:.6g}, mass drift "
          f"{abs(rows[-1][1] - rows[0][1]):.3e}")
    return cfg, out, {"steps": nsteps}


def cmd_residual(args):
    from .cascade import HarmonicJet, PlaneWaveSpec, WaveComponent, zeroth_field
    from .scalar import scalar_residual

    cfg = _config(args)
    out = _outdir(args, cfg)
    g, p = cfg.grid, cfg.params
    comps = tuple(WaveComponent(*m) for m in cfg["initial"]["modes"])
    jet = HarmonicJet(g, zeroth_field(PlaneWaveSpec(comps, g.Lx, g.Ly, p.ratio), g))
    regimes = [cfg.regime] if args.case else [Regime.CASE1, Regime.CASE2, Regime.CASE3,
                                                  Regime.CASE4]
    rows = []
    for r in regimes:
        for form in ("consistent", "printed"):
            for label, lin in (("full", False), ("linear", True)):
                res = scalar_residual(jet, cfg.bathymetry, p, r, form, linear_only=lin)
                rows.append((r.value, form, label, float(np.max(np.abs(res))),
                             float(np.sqrt(np.mean(res * res)))))
    io.write_csv(out / "residual.csv", ("case", "form", "terms", "max_abs", "rms"), rows)
    for row in rows:
        print("case {} {:10s} {:6s} max {:.3e}".format(*row[:4]))
    return cfg, out, {}


def cmd_perturb(args):
    from .cascade import (SOURCE_NAMES, HarmonicJet, PlaneWaveSpec, WaveComponent,
                          compose_and_surface, correction_sources, solve_all, wave_operator,
                          zeroth_field)
    from .dynamics import WaveState
    from .scalar import scalar_residual

    cfg = _config(args)
    out = _outdir(args, cfg)
    g, p = cfg.grid, cfg.params
    t = cfg["perturb"]["t"]
    comps = tuple(WaveComponent(*m) for m in cfg["initial"]["modes"])
    f0 = zeroth_field(PlaneWaveSpec(comps, g.Lx, g.Ly, p.ratio), g)
    bath = cfg.bathymetry if p.delta else None
    form = _form(args, cfg)
    corr = solve_all(f0, bath, p, form=form, on_resonance=cfg["perturb"]["on_resonance"])
    src = correction_sources(f0, bath, p, form)
    rows = []
    for name in SOURCE_NAMES:
        err = (wave_operator(corr[name], p) - src[name]).cleaned() if name != "d" or p.delta else None
        e = max([abs(v) for v in err.terms.values()] + [0.0]) if err is not None else 0.0
        rows.append((name, len(src[name].terms), len(corr[name].terms), e))
    io.write_csv(out / "corrections.csv", ("correction", "source_harmonics", "harmonics",
                                          "operator_error"), rows)
    jet, eta = compose_and_surface(f0, corr, p, g, t)
    r1 = float(np.max(np.abs(scalar_residual(jet, bath, p, Regime.CASE1))))
    r0 = float(np.max(np.abs(scalar_residual(HarmonicJet(g, f0, t), bath, p, Regime.CASE1))))
    ratio = r1 / r0 if r0 else 0.0
    io.write_csv(out / "perturb.csv", ("t", "residual_f0", "residual_composite", "ratio"),
                 [(t, r0, r1, ratio)])
    io.save_snapshot(out / "perturb_eta.b2p1", WaveState(eta, jet(0, 0, 0), t, g))
    print(f"perturb: residual ratio {ratio:.4g} at t={t:g}")
    return cfg, out, {"ratio": ratio}


def cmd_reduce_check(args):
    from .reduction import reduction_check

    cfg = _config(args)
    out = _outdir(args, cfg)
    g, p, r = cfg.grid, cfg.params, cfg.regime
    eta, f, _ = initial_fields(cfg, g, p, args.seed)
    step_cfg, nsteps = _time(cfg, g)
    rep = reduction_check(g, cfg.bathymetry, p, r, eta, f, nsteps=nsteps, dt=step_cfg.dt,
                          form=_form(args, cfg))
    io.write_csv(out / "reduce_check.csv",
                 ("case", "reducible", "steps", "max_abs_diff", "max_y_variance", "reason"),
                 [(r.value, int(rep.reducible), rep.steps, rep.max_abs_diff, rep.max_y_variance,
                   rep.reason.replace(",", ";"))])
    print(f"reduce-check: reducible={rep.reducible} max|diff|={rep.max_abs_diff:.3e} "
          f"y-variance={rep.max_y_variance:.3e} {rep.reason}")
    return cfg, out, {"reducible": rep.reducible}


def cmd_soliton_demo(args):
    from .params import SmallParams
    from .reduction import KDV, soliton_speed
    from .studies import soliton_run

    cfg = _config(args, required=False)
    if cfg is not None:
        p = cfg.params
        n, L = cfg["grid"]["nx"], cfg["grid"]["Lx"]
        amp, t_end = cfg["initial"]["amp"], cfg["time"]["t_end"]
        bath = cfg.bathymetry
    else:
        p = SmallParams(alpha=0.1, beta=0.1, gamma=0.1, delta=0.0)
        n, L, amp, t_end, bath = 256, 80.0, 1.0, 10.0, None
    target = KDV if (args.case or "").lower() in ("kdv", "kdvuneven") else \
        (Regime.parse(args.case) if args.case else Regime.CASE1)
    out = _outdir(args, cfg)
    rows, speed = soliton_run(p, target, n=n, L=L, amp=amp, t_end=t_end, bath=bath,
                              form=args.form or "consistent", as_printed=args.as_printed)
    io.write_csv(out / "soliton.csv", ("t", "crest", "shape_drift"), rows)
    want = soliton_speed(amp, p)
    print(f"soliton-demo ({'kdv' if target is KDV else target.name}): speed {speed:.5f} "
          f"(theory {want:.5f}), final shape drift {rows[-1][2]:.3e}")
    return cfg, out, {"speed": speed}


def cmd_potential(args):
    from .potential import PotentialSeries, bottom_F, potential_residuals

    cfg = _config(args)
    out = _outdir(args, cfg)
    g, p, r = cfg.grid, cfg.params, cfg.regime
    _, f, _ = initial_fields(cfg, g, p, args.seed)
    bath = cfg.bathymetry.sample(g)
    F = bottom_F(f, bath, p, r, g)
    ps = PotentialSeries(f, F, cfg["potential"]["M"], p, g)
    rows = []
    for z in np.linspace(0.0, 1.0, cfg["potential"]["z_samples"]):
        lap, _ = potential_residuals(ps, bath, [float(z)])
        rows.append((float(z), lap))
    _, bottom = potential_residuals(ps, bath, [])
    io.write_csv(out / "potential_laplace.csv", ("z", "laplace_residual"), rows)
    io.write_csv(out / "potential_bottom.csv", ("bottom_residual",), [(bottom,)])
    print(f"potential: max Laplace residual {max(v for _, v in rows):.3e}, "
          f"bottom residual {bottom:.3e}")
    return cfg, out, {}


def cmd_derive(args):
    from .oracle import golden
    from .oracle.derive import derive_eta, derive_scalar_equation, derive_pair
    from .oracle.printed import printed_eta, printed_pair, printed_scalar
    from .oracle.termsum import diff_termsums, params_name, symbol_name

    if args.regenerate_golden:
        for path in golden.regenerate():
            print(path)
        return None, None, {}
    if not args.case:
        raise ConfigError("derive needs --case N")
    r = Regime.parse(args.case)
    what = args.what
    if what == "scalar":
        derived, printed = derive_scalar_equation(r), (printed_scalar(r) if args.diff_printed else None)
    elif what == "eta":
        derived, printed = derive_eta(r), (printed_eta(r) if args.diff_printed else None)
    else:
        kin, dyn = derive_pair(r)
        derived = kin
        if args.diff_printed:
            pk, pd = printed_pair(r)
            print("dynamic condition diff (derived - printed):")
            print(str(diff_termsums(dyn, pd)) or "  (empty)")
            printed = pk
        print("kinematic condition:" if not args.diff_printed else
              "kinematic condition diff (derived - printed):")
    rows = []
    if printed is None:
        print(derived)
        body = derived
    else:
        body = diff_termsums(derived, printed)
        print(str(body) if len(body) else "(empty diff)")
    for exps, factors, coef in body:
        rows.append((params_name(exps), " ".join(symbol_name(f) for f in factors), str(coef)))
    out = None
    if args.out:
        out = _outdir(args, None)
        name = "derive_diff.csv" if printed is not None else "derive.csv"
        io.write_csv(out / name, ("params", "monomial", "coefficient"), rows)
    return None, out, {"terms": len(rows)}


def _threads():
    try:
        return max(1, int(os.environ.get("B2P1_THREADS", "1")))
    except ValueError:
        raise InvalidParameter("B2P1_THREADS must be an integer") from None


def cmd_sweep(args):
    from .studies import STUDIES, loglog_slope

    cfg = _config(args)
    out = _outdir(args, cfg)
    sw = cfg["sweep"]
    fn = STUDIES[sw["quantity"]]
    eps = list(sw["eps"])
    if len(eps) < 2:
        raise ConfigError("sweep needs at least two eps values", cfg.lines.get(("sweep", "eps")),
                          "eps")
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        values = list(pool.map(fn, eps))
    slope = loglog_slope(eps, values)
    rows = []
    for i, (e, v) in enumerate(zip(eps, values)):
        local = loglog_slope(eps[i - 1:i + 1], values[i - 1:i + 1]) if i else float("nan")
        rows.append((e, v, local))
    rows.append(("fit", float("nan"), slope))
    io.write_csv(out / "sweep.csv", ("eps", "value", "slope"), rows)
    print(f"sweep {sw['quantity']}: slope {slope:.4f}")
    return cfg, out, {"slope": slope}


COMMANDS = {
    "simulate": cmd_simulate,
    "residual": cmd_residual,
    "perturb": cmd_perturb,
    "reduce-check": cmd_reduce_check,
    "soliton-demo": cmd_soliton_demo,
    "potential": cmd_potential,
    "derive": cmd_derive,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="b2p1", description="(2+1)D Boussinesq wave toolkit")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="run configuration file")
        sp.add_argument("--case", help="regime: 1, 2, 3, 3st, 4 (soliton-demo also accepts kdv)")
        sp.add_argument("--formulation", choices=("pair", "scalar"))
        sp.add_argument("--form", choices=("printed", "consistent"))
        sp.add_argument("--as-printed", action="store_true",
                        help="KdV dispersion coefficient 1/6 instead of beta/6")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized initial data")
        if name == "derive":
            sp.add_argument("--diff-printed", action="store_true")
            sp.add_argument("--what", choices=("scalar", "eta", "pair"), default="scalar")
            sp.add_argument("--regenerate-golden", action="store_true",
                            help="rebuild the committed evaluation plans")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg, out, extra = COMMANDS[args.command](args)
    except B2P1Error as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return e.exit_status
    if out is not None:
        echo = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items())
                        if k not in ("command", "out"))
        io.write_manifest(out / "run.manifest", cfg, args.command, time.perf_counter() - t0, extra,
                          echo)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
