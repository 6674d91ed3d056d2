"""Command-line entry point.

Subcommands ``partner``, ``verify``, ``figure`` and ``spectrum``.  Every
option may also be given in a flat ``key = value`` config file passed with
``--config``; command-line flags win over the file.

Exit codes: 0 pass, 1 verification failure, 2 configuration or
precondition error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, darboux, ginocchio as gin, oscillator as osc, spectra
from .core import ContourError, build_contour, pt_defect

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "oscillator": {"alpha": "0.75", "q": 1, "epsilon": 1.0, "half_width": 8.0,
                   "n_points": 1601, "m": 1, "tol": 5e-3, "k": 6},
    # epsilon defaults to min(1, gamma^-2), inside the confining limit pi/(2 gamma^2)
    "ginocchio": {"alpha": "0.75", "q": 1, "gamma": 1.0, "s": 2.0, "epsilon": None,
                  "half_width": 40.0, "n_points": 4001, "m": 1, "tol": 1e-2, "k": 0},
}

RESIDUAL_TOL = {"oscillator": 1e-6, "ginocchio": 1e-5}
PT_TOL = {"oscillator": 1e-10, "ginocchio": 1e-8}
GRAM_TOL = 1e-4
CLOSED_FORM_TOL = 1e-8

FIGURE_HALF_WIDTH = 5.0
FIGURE_ROWS = 1001


class ConfigError(ValueError):
    pass


def parse_complex(text) -> complex:
    """Parse ``"a+bi"`` style numbers (``i`` or ``j``)."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    t = str(text).strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") and t[:-1] in ("", "+", "-"):
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex number '{text}'") from exc


def _plain_alpha(a: complex):
    return a.real if a.imag == 0 else a


def read_config(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


@dataclass
class RunConfig:
    model: str
    params: object
    m: int
    contour: tuple
    out_dir: Path
    tol: float
    k: int
    skip: bool = True
    extra: dict = field(default_factory=dict)

    def contour_obj(self):
        return build_contour(*self.contour)

    def tolerances(self):
        return {"match": self.tol, "match_relative": self.model == "ginocchio",
                "residual": RESIDUAL_TOL[self.model], "pt": PT_TOL[self.model],
                "gram": GRAM_TOL, "closed_form": CLOSED_FORM_TOL}


def build_config(ns) -> RunConfig:
    file_cfg = read_config(ns.config) if getattr(ns, "config", None) else {}
    model = ns.model or file_cfg.get("model", "oscillator")
    if model not in DEFAULTS:
        raise ConfigError(f"unknown model '{model}'")
    merged = dict(DEFAULTS[model])
    merged.update({k: v for k, v in file_cfg.items() if k != "model"})
    for key in ("alpha", "q", "gamma", "s", "epsilon", "half_width", "n_points", "m", "tol",
                "k", "out_dir"):
        val = getattr(ns, key, None)
        if val is not None:
            merged[key] = val
    try:
        alpha = _plain_alpha(parse_complex(merged["alpha"]))
        q = int(merged["q"])
        if merged["epsilon"] is None:
            merged["epsilon"] = min(1.0, float(merged["gamma"]) ** -2)
        eps = float(merged["epsilon"])
        L = float(merged["half_width"])
        N = int(merged["n_points"])
        m = int(merged["m"])
        tol = float(merged["tol"])
        k = int(merged["k"])
        if model == "oscillator":
            params = osc.OscillatorParams(alpha, q, eps)
        else:
            params = gin.GinocchioParams(float(merged["gamma"]), float(merged["s"]), alpha, q, eps)
            if eps >= gin.confining_epsilon_limit(params.gamma):
                raise ConfigError(
                    f"epsilon = {eps} >= pi/(2 gamma^2) = {gin.confining_epsilon_limit(params.gamma):.6g}: "
                    "the contour image does not reach |u| -> infinity")
        build_contour(eps, L, N)
    except (osc.ParameterError, gin.ParameterError, ContourError) as exc:
        raise ConfigError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid option value: {exc}") from exc
    if m < 0:
        raise ConfigError("m must be non-negative")
    if model == "ginocchio" and m not in [lv.n for lv in gin.levels(params)]:
        raise ConfigError(f"m = {m} is not a bound level of the Ginocchio potential "
                          f"(admissible: {[lv.n for lv in gin.levels(params)]})")
    out_dir = Path(merged.get("out_dir", "."))
    return RunConfig(model, params, m, (eps, L, N), out_dir, tol, k,
                     skip=not getattr(ns, "no_skip", False))


# -- output helpers -------------------------------------------------------------

def _c(z):
    z = complex(z)
    return [z.real, z.imag]


def write_csv(path, header, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([format(float(v), ".17g") for v in row])
    return path


def reproducibility(cfg: RunConfig, argv):
    return {"software": "ptdarboux", "version": __version__,
            "python": platform.python_version(), "numpy": np.__version__,
            "argv": list(argv), "params": cfg.params.as_dict(), "m": cfg.m,
            "grid": build_contour(*cfg.contour).meta(), "tolerances": cfg.tolerances()}


def write_json(path, payload):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=_json_default) + "\n")
    return path


def _json_default(o):
    if isinstance(o, complex):
        return _c(o)
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(type(o))


# -- model plumbing ---------------------------------------------------------------

def _model_pair(cfg: RunConfig, c):
    p = cfg.params
    if cfg.model == "oscillator":
        return osc.pair(p, cfg.m, c), None, osc.energy(p, cfg.m), osc.beta(p, cfg.m)
    cmap = gin.u_of_r(p, c)
    return gin.pair(p, cmap, cfg.m), cmap, gin.energy(p, cfg.m), gin.beta(p, cfg.m)


def _closed_form_deviations(cfg, c, cmap):
    p = cfg.params
    dev = {}
    if cfg.model == "oscillator":
        if cfg.m in (0, 1):
            dev[f"partner_m{cfg.m}_closed_form"] = osc.partner_closed(p, cfg.m, c).meta["deviation"]
        elif cfg.m == 2:
            dev["partner_m2_literal"] = osc.partner_closed(p, 2, c).meta["deviation"]
            dev["partner_m2_squared_denominator"] = \
                osc.partner_closed(p, 2, c, variant="squared").meta["deviation"]
        dev[f"superpotential_m{cfg.m}_closed_form"] = float(np.max(np.abs(
            osc.superpotential(p, cfg.m, c).values
            - darboux.superpotential_from_state(osc.eigenfunction(p, cfg.m, c)).values)))
    else:
        dev[f"superpotential_m{cfg.m}_closed_form"] = float(np.max(np.abs(
            gin.superpotential(p, cmap, cfg.m).values
            - darboux.superpotential_from_state(gin.eigenfunction(p, cmap, cfg.m)).values)))
        if cfg.m == 1:
            dev["partner_m1_literal"] = gin.partner_m1(p, cmap).meta["literal_deviation"]
        dev["map_newton_residual"] = float(np.max(cmap.residuals))
        dev["map_newton_vs_ode"] = cmap.ode_gap
    return dev


# -- commands -------------------------------------------------------------------------

def cmd_partner(cfg: RunConfig, argv=()):
    t0 = time.perf_counter()
    c = cfg.contour_obj()
    pr, cmap, E_m, beta = _model_pair(cfg, c)
    t1 = time.perf_counter()
    dev = _closed_form_deviations(cfg, c, cmap)
    t2 = time.perf_counter()
    cols = [c.x, pr.v_minus.values.real, pr.v_minus.values.imag,
            pr.v_plus.values.real, pr.v_plus.values.imag, pr.W.values.real, pr.W.values.imag]
    csv_path = write_csv(cfg.out_dir / "partner.csv",
                         ["x", "re_v_minus", "im_v_minus", "re_v_plus", "im_v_plus", "re_W", "im_W"],
                         cols)
    payload = {"params": cfg.params.as_dict(), "m": cfg.m, "beta": _c(beta),
               "seed_energy": _c(E_m), "deviations": dev,
               "pair_identities": {k: v[0] for k, v in pr.check().items()},
               "timings": {"pair": t1 - t0, "deviations": t2 - t1},
               "csv": str(csv_path), "reproducibility": reproducibility(cfg, argv)}
    write_json(cfg.out_dir / "partner.json", payload)
    return EXIT_OK, payload


def _predicted_levels(cfg):
    p = cfg.params
    if cfg.model == "oscillator":
        k = cfg.k or 6
        lv = sorted((osc.energy(p.with_q(q), n) for q in (1, -1) for n in range(k + 1)),
                    key=lambda e: e.real)
        return lv[:k]
    lv = [L.energy for q in (1, -1) for L in gin.levels(p.with_q(q))]
    return sorted(lv, key=lambda e: e.real)


def _check(value, tol):
    return {"value": float(value), "tol": tol, "pass": bool(value < tol)}


def cmd_verify(cfg: RunConfig, argv=()):
    timings = {}
    t = time.perf_counter()
    c = cfg.contour_obj()
    p = cfg.params
    tols = cfg.tolerances()
    report_only = not p.is_real
    pr, cmap, E_m, beta = _model_pair(cfg, c)
    timings["pair"] = time.perf_counter() - t

    predicted = _predicted_levels(cfg)
    k = cfg.k or len(predicted)
    t = time.perf_counter()
    A, B = spectra.spectra_concurrently([pr.v_minus, pr.v_plus], k)
    timings["spectra"] = time.perf_counter() - t

    relative = tols["match_relative"]
    skip = [E_m] if cfg.skip else []
    match = spectra.match_spectra(A, B, skip=skip, tol=cfg.tol, relative=relative)
    closed = spectra.match_spectra(
        A, spectra.SpectrumReport(np.array(predicted[:k]), k, A.grid_meta, 0.0),
        skip=[], tol=cfg.tol, relative=relative)

    t = time.perf_counter()
    residuals = {}
    rtol = tols["residual"]
    if cfg.model == "oscillator":
        for q in (1, -1):
            pq = p.with_q(q)
            for n in range(5):
                psi = osc.eigenfunction(pq, n, c)
                residuals[f"psi_{n}_q{q:+d}"] = _check(
                    spectra.residual(pr.v_minus, psi, osc.energy(pq, n)), rtol)
                if q == p.q and n == cfg.m:
                    continue
                phi = osc.map_excited(p, cfg.m, n, c, q_state=q)
                residuals[f"mapped_{n}_q{q:+d}"] = _check(
                    spectra.residual(pr.v_plus, phi, phi.meta["energy"]), 1e-5)
        if cfg.m == 1:
            phi0, e0 = osc.partner_ground_state(p, c)
            residuals["partner_ground_state"] = _check(
                spectra.residual(osc.partner_closed(p, 1, c), phi0, e0), rtol)
        states = [osc.eigenfunction(p, n, c) for n in range(3)]
        mixed = [osc.eigenfunction(p, 0, c), osc.eigenfunction(p.with_q(-p.q), 0, c)]
    else:
        for q in (1, -1):
            pq = p.with_q(q)
            for L in gin.levels(pq):
                psi = gin.eigenfunction(pq, cmap, L.n)
                residuals[f"psi_{L.n}_q{q:+d}"] = _check(
                    spectra.residual(pr.v_minus, psi, L.energy), rtol)
                if q == p.q and L.n == cfg.m:
                    continue
                phi = darboux.map_state(psi, gin.eigenfunction(p, cmap, cfg.m))
                residuals[f"mapped_{L.n}_q{q:+d}"] = _check(
                    spectra.residual(pr.v_plus, phi, L.energy), 1e-5)
        states = [gin.eigenfunction(p, cmap, L.n) for L in gin.levels(p)]
        other = gin.levels(p.with_q(-p.q))
        mixed = [states[0]] + ([gin.eigenfunction(p.with_q(-p.q), cmap, other[0].n)] if other else [])
    timings["residuals"] = time.perf_counter() - t

    gram, notes = {}, []
    for name, group in (("same_q", states), ("mixed_q", mixed)):
        if len(group) > 1:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                G = spectra.gram_cproduct(group)
            notes += [f"{name}: {w.message}" for w in caught]
            off = np.abs(G - np.diag(np.diag(G))).max()
            gram[name] = _check(off, GRAM_TOL)

    pt = {}
    if p.is_real:
        for name, f, odd in (("v_minus", pr.v_minus, False), ("v_plus", pr.v_plus, False),
                             ("W_odd", pr.W, True)):
            pt[name] = _check(pt_defect(f, odd=odd), tols["pt"])

    dev = _closed_form_deviations(cfg, c, cmap)
    dev_checks = {}
    for key, val in dev.items():
        if key in ("partner_m0_closed_form", "partner_m1_closed_form") or key.startswith("superpotential"):
            dev_checks[key] = _check(val, CLOSED_FORM_TOL if cfg.model == "oscillator" else 1e-7)
        elif key == "map_newton_residual":
            dev_checks[key] = _check(val, gin.NEWTON_TOL)
        elif key == "map_newton_vs_ode":
            dev_checks[key] = _check(val, gin.ODE_TOL)

    checks = {
        "isospectral_match": match.verdict,
        "closed_form_spectrum": closed.verdict,
        "imag_parts": bool(A.max_imag < 1e-6 and B.max_imag < 1e-6),
        "residuals": all(v["pass"] for v in residuals.values()),
        "gram": all(v["pass"] for v in gram.values()),
        "pt_symmetry": all(v["pass"] for v in pt.values()),
        "closed_forms": all(v["pass"] for v in dev_checks.values()),
    }
    passed = all(checks.values())
    verdict = "report-only" if report_only else ("pass" if passed else "fail")
    payload = {
        "params": p.as_dict(), "m": cfg.m, "beta": _c(beta), "seed_energy": _c(E_m),
        "spectra": {"v_minus": A.as_dict(), "v_plus": B.as_dict(),
                    "predicted": [_c(e) for e in predicted]},
        "matches": {"isospectral": match.as_dict(), "closed_form": closed.as_dict()},
        "residuals": residuals, "gram": gram, "pt": pt,
        "deviations": dev, "deviation_checks": dev_checks,
        "checks": checks, "verdict": verdict, "warnings": notes, "timings": timings,
        "reproducibility": reproducibility(cfg, argv),
    }
    write_json(cfg.out_dir / "verify.json", payload)
    if report_only:
        return EXIT_OK, payload
    return (EXIT_OK if passed else EXIT_FAIL), payload


def cmd_figure(which, cfg: RunConfig, argv=()):
    if cfg.model != "oscillator":
        raise ConfigError("figures exist only for the oscillator model")
    if which not in ("fig1", "fig2"):
        raise ConfigError(f"unknown figure '{which}'")
    p = cfg.params
    c = build_contour(p.epsilon, FIGURE_HALF_WIDTH, FIGURE_ROWS)
    if which == "fig1":
        f = osc.partner_closed(p, 1, c)
    else:
        f, _ = osc.partner_ground_state(p, c)
    path = write_csv(cfg.out_dir / f"{which}.csv", ["x", "re", "im"],
                     [c.x, f.values.real, f.values.imag])
    return EXIT_OK, {"csv": str(path)}


def cmd_spectrum(cfg: RunConfig, which="minus", argv=()):
    c = cfg.contour_obj()
    pr, _, E_m, beta = _model_pair(cfg, c)
    v = pr.v_minus if which == "minus" else pr.v_plus
    k = cfg.k or len(_predicted_levels(cfg))
    t = time.perf_counter()
    S = spectra.eigen_spectrum(spectra.discretize(v), k)
    payload = {"params": cfg.params.as_dict(), "m": cfg.m, "which": which,
               "spectra": {which: S.as_dict()},
               "timings": {"spectrum": time.perf_counter() - t},
               "reproducibility": reproducibility(cfg, argv)}
    write_json(cfg.out_dir / "spectrum.json", payload)
    return EXIT_OK, payload


# -- argument parsing -------------------------------------------------------------------

def _common(sp):
    sp.add_argument("--config", help="flat key = value file; flags override it")
    sp.add_argument("--model", choices=sorted(DEFAULTS))
    sp.add_argument("--alpha", help='complex, e.g. "0.75" or "0.75i"')
    sp.add_argument("--q", type=int, choices=(1, -1))
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--s", type=float)
    sp.add_argument("--m", type=int)
    sp.add_argument("--epsilon", type=float)
    sp.add_argument("--half-width", dest="half_width", type=float)
    sp.add_argument("--n-points", dest="n_points", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--k", type=int, help="number of eigenvalues (0: model default)")
    sp.add_argument("--out-dir", dest="out_dir", type=Path)


def make_parser():
    parser = argparse.ArgumentParser(
        prog="ptdarboux",
        description="Darboux partners of PT-symmetric potentials and their numerical spectra.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("partner", help="write v-, v+ and W on the contour"))
    sp = sub.add_parser("verify", help="spectral and closed-form verification suite")
    _common(sp)
    sp.add_argument("--no-skip", action="store_true",
                    help="do not exempt the seed level from isospectral matching")
    sp = sub.add_parser("figure", help="CSV data for the potential / ground-state figures")
    sp.add_argument("which", choices=("fig1", "fig2"))
    _common(sp)
    sp = sub.add_parser("spectrum", help="lowest eigenvalues of v- or v+")
    sp.add_argument("--which", choices=("minus", "plus"), default="minus")
    _common(sp)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = make_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = build_config(ns)
        if ns.command == "partner":
            code, _ = cmd_partner(cfg, argv)
        elif ns.command == "verify":
            code, payload = cmd_verify(cfg, argv)
            print(f"verdict: {payload['verdict']}")
            for name, ok in payload["checks"].items():
                print(f"  {name:24s} {'pass' if ok else 'FAIL'}")
        elif ns.command == "figure":
            code, _ = cmd_figure(ns.which, cfg, argv)
        else:
            code, _ = cmd_spectrum(cfg, ns.which, argv)
    except (ConfigError, darboux.SeedVanishes, darboux.Annihilated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (gin.MapFailure, spectra.ConvergenceError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return code


if __name__ == "__main__":
    sys.exit(main())
