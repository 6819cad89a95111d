"""Command-line front end: evaluate, verify and classify a metric over a
grid of points and emit a deterministic JSON report.

    finsler-lab <report|check|classify|metrize> --phi EXPR [--p EXPR --q EXPR]
        --dim N --r A:B:K --s-frac A:B:K --u A:B:K
        [--seed N] [--rotate] [--tol-abs X] [--tol-rel X] [--json PATH]

Exit codes: 0 success, 1 failed check, 2 parse/config error, 3 every grid
point was skipped.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .curvature import flag_curvature, riemann_pack, scalar_classify
from .expr import DomainError, Node, ParseError, parse
from .geometry import (
    GeometryError,
    canonical_point,
    cartan_pack,
    degeneracy_classify,
    metric_pack,
    random_rotation,
)
from .jet import DEGREE, eval_jet
from .spray import (
    metrizability_from_spray,
    metrizability_residuals,
    pq_from_phi,
    spray_pack_from_jets,
    horizontal_residual,
)
from .surface import berwald_frame, main_scalar, riemannian_test

DEFAULT_TOL_ABS = 1e-9
DEFAULT_TOL_REL = 1e-7


@dataclass
class RunConfig:
    subcommand: str
    phi: str
    dim: int
    r_grid: list[float]
    s_fraction_grid: list[float]
    u_grid: list[float]
    seed: int = 0
    rotate: bool = False
    tol_abs: float = DEFAULT_TOL_ABS
    tol_rel: float = DEFAULT_TOL_REL
    p_expr: str | None = None
    q_expr: str | None = None
    output: str | None = None

    def as_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "phi": self.phi,
            "dim": self.dim,
            "r_grid": self.r_grid,
            "s_fraction_grid": self.s_fraction_grid,
            "u_grid": self.u_grid,
            "seed": self.seed,
            "rotate": self.rotate,
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "p_expr": self.p_expr,
            "q_expr": self.q_expr,
            "jet_degree": DEGREE,
        }


def parse_range(text: str) -> list[float]:
    """'A:B:K' -> K evenly spaced values from A to B."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be A:B:K, got {text!r}")
    start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise ValueError(f"range count must be >= 1, got {count}")
    return [float(v) for v in np.linspace(start, stop, count)]


@dataclass
class _Check:
    name: str
    max_residual: float = 0.0
    passed: bool = True

    def feed(self, residual: float, tol: float):
        residual = float(abs(residual))
        if residual > self.max_residual:
            self.max_residual = residual
        if residual > tol:
            self.passed = False


def _grid_points(cfg: RunConfig):
    """Materialized grid in deterministic index order, plus skip records."""
    rotation = None
    if cfg.rotate:
        rotation = random_rotation(cfg.dim, np.random.default_rng(cfg.seed))
    points, skipped = [], []
    for r in cfg.r_grid:
        for frac in cfg.s_fraction_grid:
            for u in cfg.u_grid:
                s = frac * r
                try:
                    points.append(canonical_point(cfg.dim, r, s, u, rotation=rotation))
                except GeometryError as exc:
                    skipped.append({"r": r, "s": s, "u": u, "reason": str(exc)})
    return points, skipped


def _point_record(phi: Node, p, dim: int) -> dict:
    jet = eval_jet(phi, p.r, p.s)
    mp = metric_pack(jet, p)
    sp = pq_from_phi(jet, p)
    cv = riemann_pack(sp, jet, p)
    mr = metrizability_from_spray(jet, sp, p)
    rec = {
        "r": p.r,
        "s": p.s,
        "u": p.u,
        "F": mp.F,
        "P": sp.P,
        "Q": sp.Q,
        "R1": cv.R1,
        "R2": cv.R2,
        "R3": cv.R3,
        "R4": cv.R4,
        "R5": cv.R5,
        "K": flag_curvature(cv, mp.F / p.u, p),
        "C1": mr.C1,
        "C2": mr.C2,
        "C3": cv.C3,
        "det_direct": mp.det_direct,
        "det_formula": mp.det_formula,
        "regular": list(mp.regular),
    }
    if dim == 2:
        ms = main_scalar(jet, p)
        rec["I"] = ms.I
        rec["I_direct"] = ms.I_direct
    return rec


def _run_checks(phi: Node, points, cfg: RunConfig) -> list[_Check]:
    tol = max(cfg.tol_abs, cfg.tol_rel)
    names = [
        "metric_inverse",
        "energy_homogeneity",
        "euler_identity",
        "det_formula",
        "rho_contractions",
        "cartan_y_annihilation",
        "metrizability_C1_C2",
        "horizontal_dhF",
        "spray_homogeneity",
        "curvature_C3",
        "identity_R2",
        "identity_R4",
        "jacobi_y_annihilation",
        "curvature_trace",
    ]
    if cfg.dim == 2:
        names += ["frame_orthonormality", "frame_resolves_metric", "main_scalar_two_routes"]
    checks = {name: _Check(name) for name in names}

    for p in points:
        jet = eval_jet(phi, p.r, p.s)
        mp = metric_pack(jet, p)
        cp = cartan_pack(jet, p)
        sp = pq_from_phi(jet, p)
        cv = riemann_pack(sp, jet, p)
        w = p.r**2 - p.s**2
        phi0 = mp.F / p.u
        phi_s = jet.partial(0, 1)
        phi_ss = jet.partial(0, 2)
        dval = phi0 - p.s * phi_s + w * phi_ss

        checks["metric_inverse"].feed(
            np.max(np.abs(mp.g @ mp.ginv - np.eye(p.n))), tol
        )
        checks["energy_homogeneity"].feed(
            (p.y @ mp.g @ p.y - mp.F**2) / max(1.0, mp.F**2), tol
        )
        n_lo = p.x - (p.s / p.u) * p.y
        dF_dy = (phi0 / p.u) * p.y + phi_s * n_lo
        checks["euler_identity"].feed(
            np.max(np.abs(mp.g @ p.y - mp.F * dF_dy)) / max(1.0, mp.F**2), tol
        )
        checks["det_formula"].feed(
            (mp.det_direct - mp.det_formula) / max(1.0, abs(mp.det_formula)), tol
        )
        contr1 = phi_s * mp.rho0 + phi0 * mp.rho2 + (p.s * phi0 + w * phi_s) * mp.rho3
        contr2 = mp.rho0 + w * mp.rho3 - 1.0 / (phi0 * dval)
        checks["rho_contractions"].feed(max(abs(contr1), abs(contr2)), tol)
        checks["cartan_y_annihilation"].feed(
            np.max(np.abs(np.einsum("ijk,k->ij", cp.C, p.y)))
            / max(1.0, np.max(np.abs(cp.C)) * p.u),
            tol,
        )
        mr = metrizability_from_spray(jet, sp, p)
        checks["metrizability_C1_C2"].feed(
            max(abs(mr.C1), abs(mr.C2)) / max(1.0, phi0), tol
        )
        checks["horizontal_dhF"].feed(
            np.max(np.abs(horizontal_residual(jet, sp, p))) / (p.u * max(1.0, phi0)),
            tol,
        )
        checks["spray_homogeneity"].feed(
            np.max(np.abs(sp.N @ p.y - 2 * sp.G)) / max(1.0, np.max(np.abs(sp.G))),
            tol,
        )
        scale = max(1.0, abs(cv.R1), abs(cv.R2), abs(cv.R3), abs(cv.R4), abs(cv.R5))
        checks["curvature_C3"].feed(cv.C3 / (scale * max(1.0, phi0)), tol)
        checks["identity_R2"].feed(cv.id_R2 / scale, tol)
        checks["identity_R4"].feed(cv.id_R4 / scale, tol)
        checks["jacobi_y_annihilation"].feed(
            np.max(np.abs(cv.Rmat @ p.y)) / (scale * p.u**2 * max(1.0, p.u, p.r)),
            tol,
        )
        trace = np.trace(cv.Rmat) - p.u**2 * ((p.n - 1) * cv.R1 + w * cv.R3)
        checks["curvature_trace"].feed(trace / (scale * p.u**2), tol)

        if cfg.dim == 2:
            fr = berwald_frame(jet, p)
            resid = max(
                abs(fr.ell_hi @ fr.ell_lo - 1.0),
                abs(fr.ell_hi @ fr.m_lo),
                abs(fr.m_hi @ fr.m_lo - 1.0),
            )
            checks["frame_orthonormality"].feed(resid, tol)
            recon = np.outer(fr.ell_lo, fr.ell_lo) + np.outer(fr.m_lo, fr.m_lo)
            checks["frame_resolves_metric"].feed(
                np.max(np.abs(mp.g - recon)) / max(1.0, np.max(np.abs(mp.g))), tol
            )
            ms = main_scalar(jet, p)
            checks["main_scalar_two_routes"].feed(
                (ms.I - ms.I_direct) / max(1.0, abs(ms.I)), tol
            )
    return list(checks.values())


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute a subcommand; returns (report document, exit code)."""
    for frac in cfg.s_fraction_grid:
        if not -1.0 < frac < 1.0:
            raise ValueError(f"s fractions must lie in (-1, 1), got {frac}")
    if cfg.dim < 2:
        raise ValueError(f"dim must be >= 2, got {cfg.dim}")

    phi = parse(cfg.phi)
    p_ast = parse(cfg.p_expr) if cfg.p_expr is not None else None
    q_ast = parse(cfg.q_expr) if cfg.q_expr is not None else None

    points, skipped = _grid_points(cfg)
    doc: dict = {
        "config": cfg.as_dict(),
        "points": [],
        "checks": [],
        "verdicts": {},
        "skipped": skipped,
        "version": __version__,
    }
    exit_code = 0

    usable = []
    for p in points:
        try:
            eval_jet(phi, p.r, p.s)
            usable.append(p)
        except DomainError as exc:
            skipped.append({"r": p.r, "s": p.s, "u": p.u, "reason": str(exc)})
    if not usable:
        return doc, 3

    if cfg.subcommand in ("report", "check"):
        for p in usable:
            try:
                doc["points"].append(_point_record(phi, p, cfg.dim))
            except (DomainError, GeometryError) as exc:
                skipped.append({"r": p.r, "s": p.s, "u": p.u, "reason": str(exc)})
        if not doc["points"]:
            return doc, 3
        if cfg.subcommand == "check":
            checks = _run_checks(phi, usable, cfg)
            doc["checks"] = [
                {"name": c.name, "max_residual": c.max_residual, "pass": c.passed}
                for c in checks
            ]
            if not all(c.passed for c in checks):
                exit_code = 1

    elif cfg.subcommand == "classify":
        try:
            report = scalar_classify(phi, usable)
            doc["verdicts"]["is_scalar"] = report.is_scalar
            doc["verdicts"]["max_R3_residual"] = report.max_R3_residual
            doc["points"] = [
                {"r": p.r, "s": p.s, "u": p.u, "K": K} for p, K in report.K_samples
            ]
        except (DomainError, GeometryError) as exc:
            doc["verdicts"]["is_scalar"] = None
            doc["verdicts"]["scalar_error"] = str(exc)
        doc["verdicts"]["degeneracy"] = degeneracy_classify(phi, usable).value
        if cfg.dim == 2:
            try:
                doc["verdicts"]["riemannian"] = riemannian_test(phi, usable)
            except (DomainError, GeometryError) as exc:
                doc["verdicts"]["riemannian"] = None
                doc["verdicts"]["riemannian_error"] = str(exc)

    elif cfg.subcommand == "metrize":
        if p_ast is None or q_ast is None:
            raise ValueError("metrize requires --p and --q")
        tol = max(cfg.tol_abs, cfg.tol_rel)
        all_pass = True
        for p in usable:
            try:
                jet = eval_jet(phi, p.r, p.s)
                mr = metrizability_residuals(jet, p_ast, q_ast, p)
                user_sp = spray_pack_from_jets(
                    eval_jet(p_ast, p.r, p.s), eval_jet(q_ast, p.r, p.s), p
                )
                c3 = riemann_pack(user_sp, jet, p).C3
            except (DomainError, GeometryError) as exc:
                skipped.append({"r": p.r, "s": p.s, "u": p.u, "reason": str(exc)})
                continue
            phi0 = jet.partial(0, 0)
            ok = max(abs(mr.C1), abs(mr.C2)) <= tol * max(1.0, abs(phi0))
            all_pass = all_pass and ok
            doc["points"].append(
                {"r": p.r, "s": p.s, "u": p.u, "C1": mr.C1, "C2": mr.C2, "C3": c3, "pass": ok}
            )
        if not doc["points"]:
            return doc, 3
        doc["verdicts"]["metrizable"] = all_pass
        if not all_pass:
            exit_code = 1
    else:
        raise ValueError(f"unknown subcommand {cfg.subcommand!r}")

    return doc, exit_code


def _print_summary(doc: dict, file=None):
    if file is None:
        file = sys.stdout
    cfg = doc["config"]
    print(f"finsler-lab {doc['version']}  phi = {cfg['phi']}  dim = {cfg['dim']}", file=file)
    print(
        f"grid: {len(doc['points'])} points evaluated, {len(doc['skipped'])} skipped",
        file=file,
    )
    for c in doc["checks"]:
        status = "pass" if c["pass"] else "FAIL"
        print(f"  [{status}] {c['name']}: max residual {c['max_residual']:.3e}", file=file)
    for key, value in doc["verdicts"].items():
        print(f"  {key}: {value}", file=file)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="finsler-lab", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("report", "check", "classify", "metrize"):
        sp = sub.add_parser(name)
        sp.add_argument("--phi", required=True, help="phi(r, s) expression")
        sp.add_argument("--dim", type=int, default=2)
        sp.add_argument("--r", default="0.5:1.5:3", help="r grid A:B:K")
        sp.add_argument("--s-frac", default="-0.7:0.7:5", help="s/r grid A:B:K")
        sp.add_argument("--u", default="1:2:2", help="u grid A:B:K")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--rotate", action="store_true", help="random-rotate the frame")
        sp.add_argument("--tol-abs", type=float, default=DEFAULT_TOL_ABS)
        sp.add_argument("--tol-rel", type=float, default=DEFAULT_TOL_REL)
        sp.add_argument("--json", dest="json_path", default=None, help="write JSON report")
        if name == "metrize":
            sp.add_argument("--p", required=True, help="candidate P(r, s)")
            sp.add_argument("--q", required=True, help="candidate Q(r, s)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            subcommand=args.subcommand,
            phi=args.phi,
            dim=args.dim,
            r_grid=parse_range(args.r),
            s_fraction_grid=parse_range(args.s_frac),
            u_grid=parse_range(args.u),
            seed=args.seed,
            rotate=args.rotate,
            tol_abs=args.tol_abs,
            tol_rel=args.tol_rel,
            p_expr=getattr(args, "p", None),
            q_expr=getattr(args, "q", None),
            output=args.json_path,
        )
        doc, exit_code = run(cfg)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _print_summary(doc)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
