"""Command-line front end.

Subcommands ``approx``, ``douglas``, ``chordarc`` and ``rkc``. Every flag
mirrors a key of the optional ``--config`` file (plain ``key = value`` lines,
``#`` comments); flags override file values.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import boundary as bd
from .chordarc import circle_boundary, example_boundary, example_map_gradients, survey_chords
from .energy import energy_report
from .geometry import Segment
from .harmonic import fourier_coefficients, harmonic_extension, rkc_positivity_check, sample_angles
from .pipeline import FixtureSpec, all_passed, run_approximation, verify_proposition

DOUGLAS_TOL = 1e-4
GRID_TOL = 1e-2


@dataclass(frozen=True)
class RunConfig:
    omega: float = math.pi / 3
    phi: str = "flat-step"
    K: str | None = None
    m: str = "4,8,16,32,64,128,256,512"
    N: int = 512
    M: int | None = None
    r_max: float | None = None
    grid_r: int = 64
    grid_theta: int = 256
    seed: int = 0
    out: str | None = None
    threads: int = 1
    map: str | None = None
    domain: str = "disk"
    probes: int = 100
    family: str = "random"
    gradients: bool = False


KEY_TYPES = {
    "omega": float, "phi": str, "K": str, "m": str, "N": int, "M": int, "r_max": float,
    "grid_r": int, "grid_theta": int, "seed": int, "out": str, "threads": int,
    "map": str, "domain": str, "probes": int, "family": str, "gradients": "bool",
}
assert set(KEY_TYPES) == {f.name for f in fields(RunConfig)}


class ConfigError(ValueError):
    pass


def _convert(key: str, raw: str):
    typ = KEY_TYPES[key]
    if typ == "bool":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"key {key!r}: expected a boolean, got {raw!r}")
    try:
        return typ(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r} as {typ.__name__}") from None


def read_config(path) -> dict:
    """Parse ``key = value`` lines; unknown keys are errors."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path} line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in KEY_TYPES:
            raise ConfigError(f"{path} line {lineno}: unknown key {key!r}")
        try:
            values[key] = _convert(key, val)
        except ConfigError as err:
            raise ConfigError(f"{path} line {lineno}: {err}") from None
    return values


def _parse_m(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise ConfigError(f"key 'm': expected comma-separated integers, got {text!r}") from None


def _phi_and_K(cfg: RunConfig, seg: Segment):
    if cfg.phi in bd.PRESETS:
        phi, K = bd.preset(cfg.phi, seg)
    else:
        phi, K = bd.read_phi_file(cfg.phi, seg), bd.ArcSet()
    if cfg.K is not None:
        K = bd.read_arcset_file(cfg.K)
    return phi, K


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_approx(cfg: RunConfig) -> int:
    seg = Segment(cfg.omega)
    phi, K = _phi_and_K(cfg, seg)
    spec = FixtureSpec(
        omega=seg.omega, phi=phi, K=K, m_list=_parse_m(cfg.m), N=cfg.N, M=cfg.M,
        r_max=0.95 if cfg.r_max is None else cfg.r_max, grid_r=cfg.grid_r,
        grid_theta=cfg.grid_theta, seed=cfg.seed, threads=cfg.threads,
    )
    report = run_approximation(spec)
    out = cfg.out or "report.csv"
    Path(out).write_text(report.to_csv())
    Path(out).with_suffix(".json").write_text(report.to_json())
    verdicts = verify_proposition(report)
    for v in verdicts:
        print(f"{'PASS' if v.passed else 'FAIL'} {v.claim}: {v.detail}")
    print(f"boundary-annulus energy (0.9 < |z| < 0.999): {report.annulus_energy:.6e}")
    return 0 if all_passed(verdicts) else 1


CLOSED_FORM_MAPS = {
    "identity": lambda t: np.exp(1j * t),
    "z2": lambda t: np.exp(2j * t),
    "2x": lambda t: 2 * np.cos(t) + 0j,
    "zbar": lambda t: np.exp(-1j * t),
}


def _named_boundary(cfg: RunConfig, name: str):
    if name in CLOSED_FORM_MAPS:
        return CLOSED_FORM_MAPS[name]
    seg = Segment(cfg.omega)
    cfg = replace(cfg, phi=name)
    phi, _ = _phi_and_K(cfg, seg)
    return bd.canonical_fixture_boundary(seg, phi)


def cmd_douglas(cfg: RunConfig) -> int:
    g = _named_boundary(cfg, cfg.map or "identity")
    M = cfg.M if cfg.M is not None else max(4 * cfg.N, 1 << 14)
    f = fourier_coefficients(g(sample_angles(4 * cfg.N)), cfg.N)
    rep = energy_report(f, g, douglas_nodes=M, r_max=0.999 if cfg.r_max is None else cfg.r_max)
    _write(cfg.out, rep.to_json())
    ok = rep.residual_fd_douglas <= DOUGLAS_TOL and rep.residual_fd_grid <= GRID_TOL
    if not ok:
        print(f"FAIL residuals: Fourier/Douglas {rep.residual_fd_douglas:.3e} (tol {DOUGLAS_TOL}), "
              f"Fourier/grid {rep.residual_fd_grid:.3e} (tol {GRID_TOL})", file=sys.stderr)
    return 0 if ok else 1


def _load_polyline(path) -> np.ndarray:
    rows = bd._pairs_from_text(Path(path).read_text(), str(path))
    return np.array([complex(x, y) for x, y in rows])


def cmd_chordarc(cfg: RunConfig) -> int:
    n = cfg.M if cfg.M is not None else 10_000
    if cfg.domain == "disk":
        poly = circle_boundary(n)
    elif cfg.domain in ("spiral", "cusp"):
        poly = example_boundary(cfg.domain, n)
    else:
        poly = _load_polyline(cfg.domain)
    survey = survey_chords(poly, cfg.probes, cfg.seed, cfg.family)
    _write(cfg.out, survey.to_csv())
    print(f"no violation found up to ratio {survey.max_ratio:.6f} "
          f"({len(survey.rows)} probes, {survey.skipped} skipped)", file=sys.stderr)
    if cfg.gradients:
        rng = np.random.default_rng(cfg.seed)
        z = 0.9 * np.sqrt(rng.uniform(size=100)) * np.exp(2j * np.pi * rng.uniform(size=100))
        for kind in ("spiral", "cusp"):
            s = example_map_gradients(kind, z)
            print(f"{kind}: |F_w| = {np.mean(s.dw):.12f}, |F_wbar| = {np.mean(s.dwbar):.12f}, "
                  f"J = {np.mean(s.jacobian):.12f}; finite-difference deltas "
                  f"{np.max(np.abs(s.fd_dw - s.dw)):.2e}, {np.max(np.abs(s.fd_dwbar - s.dwbar)):.2e}",
                  file=sys.stderr)
    return 0 if survey.rows and math.isfinite(survey.max_ratio) else 1


def cmd_rkc(cfg: RunConfig) -> int:
    r_max = 0.95 if cfg.r_max is None else cfg.r_max
    if cfg.map is not None:
        g = _named_boundary(cfg, cfg.map)
    else:
        seg = Segment(cfg.omega)
        g = bd.canonical_fixture_boundary(seg, _phi_and_K(cfg, seg)[0])
    h = harmonic_extension(g, cfg.N, cfg.M)
    check = rkc_positivity_check(h, r_max, cfg.grid_r, cfg.grid_theta)
    print(f"min J = {check.min_jacobian:.6e} at z = {check.argmin:.6f}")
    return 0 if check.min_jacobian > 0 else 1


COMMANDS = {"approx": cmd_approx, "douglas": cmd_douglas, "chordarc": cmd_chordarc, "rkc": cmd_rkc}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmapprox", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "approx": "homeomorphic approximation run; writes report CSV and JSON",
        "douglas": "Fourier / Douglas / grid energy agreement for a named map",
        "chordarc": "chordarc ratio probes on a domain boundary",
        "rkc": "minimum Jacobian of a harmonic extension",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="plain-text 'key = value' file")
        for f in fields(RunConfig):
            typ = KEY_TYPES[f.name]
            if typ == "bool":
                p.add_argument(f"--{f.name}", action="store_const", const="true", default=None)
            else:
                p.add_argument(f"--{f.name}", default=None, metavar=f.name.upper())
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = read_config(args.config) if args.config else {}
    for key in KEY_TYPES:
        raw = getattr(args, key)
        if raw is not None:
            values[key] = _convert(key, raw)
    return RunConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
