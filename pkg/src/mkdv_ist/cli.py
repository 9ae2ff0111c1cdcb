"""Command-line interface: scatter, reconstruct, evolve, asymptote, verify.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical
failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from . import io
from .errors import InputError, NumericalError
from .evolve import EvolveParams, run
from .painleve import alpha_hypothesis, solve_painleve
from .phase import FrameContext, chi_pv_integral, kappa_of, phi_at_z0, partition_sets
from .reflectionless import reconstruct
from .scattering import Kind, PotentialSample, direct_transform

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    data: str | None = None
    out: str | None = None
    t: float = 0.0
    xmin: float = -20.0
    xmax: float = 20.0
    nx: int = 401
    zmax: float = 4.0
    nz: int = 512
    L: float = 64.0
    N: int = 2048
    dt: float = 1e-3
    T: float = 1.0
    frame: str = "auto"
    suite: str = "closed-forms"
    seed: int = 0
    allow_nongeneric: bool = False
    discrete_only: bool = False
    c2: float = 1.0
    frame_tol: float = 0.05
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("zmax", "dt", "L", "c2", "frame_tol"):
            if not getattr(self, name) > 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
        if self.nx < 2 or self.nz < 4 or self.N < 16:
            raise InputError("grids need nx >= 2, nz >= 4 and N >= 16")
        if not self.xmin < self.xmax:
            raise InputError("need xmin < xmax")

    @property
    def x_grid(self):
        return np.linspace(self.xmin, self.xmax, self.nx)


def _need(cfg, *names):
    for n in names:
        if getattr(cfg, n) is None:
            raise InputError(f"--{n} is required for {cfg.command}")


def cmd_scatter(cfg):
    _need(cfg, "input", "out")
    x, u = io.load_profile(cfg.input)
    data = direct_transform(PotentialSample(x, u), zmax=cfg.zmax, nz=cfg.nz)
    io.save_scattering(cfg.out, data)
    rep = data.report
    print(json.dumps({"solitons": len(data.solitons), "breathers": len(data.breathers),
                      "max_abs_b": rep.get("max_abs_b", 0.0), "generic": rep.get("generic", True),
                      "violations": rep.get("violations", [])}))
    if not rep.get("generic", True) and not cfg.allow_nongeneric:
        print("non-generic scattering data (use --allow-nongeneric)", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_reconstruct(cfg):
    _need(cfg, "data", "out")
    data = io.load_scattering(cfg.data)
    if data.t != 0:
        raise InputError("scattering data must be given at t = 0")
    if np.max(np.abs(data.r), initial=0.0) > 1e-6 and not cfg.discrete_only:
        raise InputError("data carry reflection; pass --discrete-only to drop it")
    x = cfg.x_grid
    io.save_profile(cfg.out, x, reconstruct(data, x, cfg.t))
    return EXIT_OK


def cmd_evolve(cfg):
    _need(cfg, "input", "out")
    x, u = io.load_profile(cfg.input)
    tr = run(PotentialSample(x, u), cfg.T, EvolveParams(cfg.L, cfg.N, cfg.dt, checkpoints=(0.0,)))
    io.save_profile(cfg.out, tr.x, tr.profiles[-1])
    io.save_conserved_log(cfg.out + ".conserved.csv", tr.log)
    return EXIT_OK


def _select_frame(data, choice):
    kind, _, idx = choice.partition(":")
    pool = {"soliton": data.solitons, "breather": data.breathers}.get(kind)
    if pool is None:
        raise InputError(f"unknown frame {choice!r}")
    try:
        return pool[int(idx)]
    except (ValueError, IndexError):
        raise InputError(f"unknown frame index in {choice!r}") from None


def _radiation_report(data, x, t):
    ctx = FrameContext(float(x), float(t))
    z0 = ctx.z0
    r0 = data.r_at(np.array([z0]))[0]
    k = float(kappa_of(r0))
    out = {"x": float(x), "z0": z0, "kappa": k}
    if r0 != 0:
        B = partition_sets(data, x / t, "RegionI", gap=0.0).B_set
        out["phi"] = phi_at_z0(data, z0, k, chi_pv_integral(data, z0), B)
    return out


def cmd_asymptote(cfg):
    _need(cfg, "data", "out")
    data = io.load_scattering(cfg.data)
    t, x = cfg.t, cfg.x_grid
    report = {"t": t, "frame": cfg.frame}
    if cfg.frame == "auto":
        sol = None
        r0 = complex(data.r_at(np.array([0.0]))[0])
        if r0 != 0 and np.any(np.abs(x) <= cfg.c2 * t ** (1 / 3)):
            alpha = alpha_hypothesis(complex(0.0, r0.imag))
            sol = solve_painleve(alpha, s_min=min(-30.0, x.min() / (3 * t) ** (1 / 3)),
                                 s_max=max(10.0, x.max() / (3 * t) ** (1 / 3)))
            report["painleve_alpha"] = alpha
        prof = asy.full_profile(x, t, data, sol, cfg.c2, cfg.frame_tol)
        u = prof.u_values
        tags = [tg.value for tg in prof.tags]
        pieces = []
        for i, tg in enumerate(tags):
            if not pieces or pieces[-1]["region"] != tg:
                pieces.append({"region": tg, "xmin": float(x[i]), "xmax": float(x[i])})
            pieces[-1]["xmax"] = float(x[i])
        report["regions"] = pieces
        report["dressing"] = {}
        for m in data.modes:
            if m.kind is Kind.SOLITON or m.velocity > 0:
                c_t, _ = asy.region3_dressing(m, data)
            else:
                df, _ = asy.region1_dressing(m, data)
                c_t = m.c * df(m.z) ** -2
            report["dressing"][str(m.z)] = [c_t.real, c_t.imag]
    elif cfg.frame == "radiation":
        u = asy.region1_generic(x, t, data, c2=cfg.c2, frame_tol=cfg.frame_tol)
        report["stationary_points"] = [_radiation_report(data, x[0], t), _radiation_report(data, x[-1], t)]
    else:
        m = _select_frame(data, cfg.frame)
        if m.kind is Kind.SOLITON:
            _, u, rep = asy.region3_soliton_frame(m, t, data, x)
        elif m.velocity > 0:
            _, u, rep = asy.region3_breather_frame(m, t, data, x)
        else:
            _, u, rep = asy.region1_breather_frame(m, t, data, x)
        report.update({k: ([v.real, v.imag] if isinstance(v, complex) else v) for k, v in rep.items()})
    io.save_profile(cfg.out, x, u)
    print(json.dumps(report, default=float))
    return EXIT_OK


def cmd_verify(cfg):
    from . import verify

    if cfg.suite not in verify.SUITES:
        raise InputError(f"unknown suite {cfg.suite!r}; choose from {sorted(verify.SUITES)}")
    results = verify.run_suite(cfg.suite, seed=cfg.seed)
    for r in results:
        print(r.line())
    if cfg.out:
        io.atomic_write(cfg.out, json.dumps([r.to_dict() for r in results], indent=1) + "\n")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {
    "scatter": cmd_scatter,
    "reconstruct": cmd_reconstruct,
    "evolve": cmd_evolve,
    "asymptote": cmd_asymptote,
    "verify": cmd_verify,
}


def build_parser():
    p = argparse.ArgumentParser(prog="mkdv-ist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *groups):
        sp.add_argument("--out")
        if "in" in groups:
            sp.add_argument("--input")
        if "data" in groups:
            sp.add_argument("--data")
        if "x" in groups:
            sp.add_argument("--t", type=float, default=0.0)
            sp.add_argument("--xmin", type=float, default=-20.0)
            sp.add_argument("--xmax", type=float, default=20.0)
            sp.add_argument("--nx", type=int, default=401)
        return sp

    sp = common(sub.add_parser("scatter", help="direct scattering of a profile CSV"), "in")
    sp.add_argument("--zmax", type=float, default=4.0)
    sp.add_argument("--nz", type=int, default=512)
    sp.add_argument("--allow-nongeneric", action="store_true")

    sp = common(sub.add_parser("reconstruct", help="profile from discrete data"), "data", "x")
    sp.add_argument("--discrete-only", action="store_true")

    sp = common(sub.add_parser("evolve", help="spectral PDE integration"), "in")
    sp.add_argument("--L", type=float, default=64.0)
    sp.add_argument("--N", type=int, default=2048)
    sp.add_argument("--dt", type=float, default=1e-3)
    sp.add_argument("--T", type=float, default=1.0)

    sp = common(sub.add_parser("asymptote", help="long-time asymptotic profile"), "data", "x")
    sp.add_argument("--frame", default="auto")
    sp.add_argument("--c2", type=float, default=1.0)
    sp.add_argument("--frame-tol", type=float, default=0.05)

    sp = common(sub.add_parser("verify", help="acceptance suites"))
    sp.add_argument("--suite", default="closed-forms")
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
