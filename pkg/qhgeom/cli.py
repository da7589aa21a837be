"""Command-line interface for qhgeom"""

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional, Tuple

import numpy as np
from colorama import init, Fore, Style

from . import config
from .characters import (SurfaceCocycle, SurfaceMesh, holonomy_from_parameters, random_gauges,
                         surface_parameters, trace_invariants)
from .errors import DomainError, InfeasibleSystemError, MeshError, QHGError
from .fig8 import (Fig8Point, build_fig8_mesh, closed_form, crosscheck, dehn_filled_value, level_one_modulus,
                   solve_dehn_point, solver_decorations, volume)
from .latsolve import CHARGE, FLATTENING, decorate, lattice_generators, solve_charge, solve_flattening
from .mesh import (Mesh, classify_vertices, path_weight, validate_charged, validate_flattened, validate_I,
                   validate_quantum)
from .moves import pentagon_batch
from .specialfn import level
from .statesum import brute_force_trace, contraction_plan, eq_mod_n, trace_tensor

init(autoreset=True)

logger = logging.getLogger(__name__)


# ── Output helpers ───────────────────────────────────────────────────────────
def _c(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _emit(payload: Dict):
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    sys.stdout.flush()


def _ok(message: str, quiet: bool = False):
    if not quiet:
        sys.stderr.write(f"{Fore.GREEN}  ✓  {message}{Style.RESET_ALL}\n")


def _fail(message: str):
    sys.stderr.write(f"{Fore.RED}  ✗  {message}{Style.RESET_ALL}\n")


def _load_mesh(path: str) -> Mesh:
    try:
        return Mesh.load(path)
    except OSError as e:
        raise MeshError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise MeshError(f"{path} is not valid JSON: {e}") from e


def _unimodular_completion(p: int, q: int) -> Tuple[int, int]:
    """(r, s) with p s - q r = 1"""
    old_r, r = p, q
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        k = old_r // r
        old_r, r = r, old_r - k * r
        old_x, x = x, old_x - k * x
        old_y, y = y, old_y - k * y
    if abs(old_r) != 1:
        raise DomainError(f"slope ({p}, {q}) is not primitive")
    # p old_x + q old_y = old_r
    return -old_y * old_r, old_x * old_r


# ── Commands ─────────────────────────────────────────────────────────────────
def cmd_validate(args) -> int:
    m = _load_mesh(args.file)
    reports = [validate_I(m, args.tol)]
    if m.is_flattened:
        reports.append(validate_flattened(m, args.tol))
    if m.is_charged:
        reports.append(validate_charged(m))
    if m.is_flattened and m.is_charged:
        reports.append(validate_quantum(m, args.N, args.tol))
    ok = all(r.ok for r in reports)
    _emit({
        "file": args.file,
        "tets": len(m.tets),
        "edges": len(m.edge_classes),
        "vertices": [vc.to_dict() for vc in classify_vertices(m)],
        "reports": {r.kind: r.to_dict() for r in reports},
        "ok": ok,
    })
    for r in reports:
        if r.ok:
            _ok(f"{r.kind}: {len(r.residuals)} edges checked", args.quiet)
        else:
            _fail(f"{r.kind}: {len(r.violations)} violations")
    return 0 if ok else 1


def _parse_weights(m: Mesh, specs: List[str]) -> List[Tuple]:
    constraints = []
    for spec in specs or []:
        name, _, value = spec.partition("=")
        if name not in m.paths or not value:
            raise MeshError(f"weight {spec!r} must read NAME=K for a path stored in the mesh")
        path = m.paths[name]
        target = path_weight(m, path, "log-derivative") + 1j * np.pi * int(value)
        constraints.append((path, target))
    return constraints


def cmd_flatten(args) -> int:
    m = _load_mesh(args.file)
    constraints = _parse_weights(m, args.weight)
    f = solve_flattening(m, constraints)
    if f is None:
        raise InfeasibleSystemError("no flattening satisfies the constraints")
    gens = lattice_generators(m, FLATTENING, [p for p, _ in constraints])
    decorated = f.apply(m)
    report = validate_flattened(decorated, args.tol)
    if args.output:
        decorated.save(args.output)
    _emit({
        "flattening": f.to_list(),
        "generators": [g.vector.tolist() for g in gens],
        "weights": {name: _c(path_weight(decorated, p)) for name, p in m.paths.items()},
        "validation": report.to_dict(),
    })
    _ok(f"flattening found, lattice of rank {len(gens)}", args.quiet)
    return 0


def cmd_charge(args) -> int:
    m = _load_mesh(args.file)
    c = solve_charge(m)
    if c is None:
        raise InfeasibleSystemError("no charge satisfies the edge conditions")
    gens = lattice_generators(m, CHARGE)
    decorated = c.apply(m)
    report = validate_charged(decorated)
    if args.output:
        decorated.save(args.output)
    _emit({
        "charge": c.to_list(),
        "generators": [g.vector.tolist() for g in gens],
        "validation": report.to_dict(),
    })
    _ok(f"charge found, lattice of rank {len(gens)}", args.quiet)
    return 0


def cmd_contract(args) -> int:
    m = _load_mesh(args.file)
    if not all(t.decorated for t in m.tets):
        m = decorate(m)
        logger.info("mesh decorated by the solvers")
    lv = level(args.N)
    plan = contraction_plan(m)
    tt = trace_tensor(m, lv, plan)
    payload = {
        "N": lv.n,
        "faces": [list(f) for f in tt.faces],
        "plan": {"steps": [list(s) for s in plan.steps], "max_rank": plan.max_rank},
    }
    if tt.rank == 0:
        payload["value"] = _c(tt.scalar)
    else:
        payload["shape"] = list(tt.values.shape)
        payload["norm"] = float(np.linalg.norm(tt.values))
    if args.brute:
        witness = eq_mod_n(brute_force_trace(m, lv), tt, lv, args.eq_tol)
        payload["brute_force"] = witness.to_dict()
        if not witness.equal:
            _emit(payload)
            _fail(f"plan and enumeration disagree (error {witness.error:.2e})")
            return 1
    _emit(payload)
    _ok(f"contracted {len(m.tets)} tetrahedra at N={lv.n}, max rank {plan.max_rank}", args.quiet)
    return 0


def cmd_pentagon(args) -> int:
    report = pentagon_batch(args.N, args.samples, args.seed, args.eq_tol,
                            progress=not args.quiet and sys.stderr.isatty())
    _emit(report.to_dict())
    if report.failed:
        _fail(f"pentagon N={report.N}: {report.failed} of {args.samples} samples failed")
        return 1
    _ok(f"pentagon N={report.N}: {report.passed} samples passed", args.quiet)
    return 0


def cmd_fig8(args) -> int:
    lv = level(args.N)
    if args.mode == "dehn":
        p, q = args.pq
        r, s = args.rs if args.rs else _unimodular_completion(p, q)
        point = solve_dehn_point(p, q)
        value = dehn_filled_value(lv, p, q, r, s, point)
        _emit({"N": lv.n, "mode": "dehn", "pq": [p, q], "rs": [r, s],
               "point": point.to_dict(), "value": _c(value)})
        _ok(f"({p}, {q}) filling at N={lv.n}: {value:.6g}", args.quiet)
        return 0

    point = Fig8Point.complete() if args.mode == "complete" else Fig8Point(complex(*args.w2))
    f, c = solver_decorations(point)
    state = trace_tensor(build_fig8_mesh(point, f, c), lv).scalar
    closed = closed_form(lv, point, f, c)
    witness = crosscheck(lv, point, f, c, tol=args.eq_tol)
    payload = {
        "N": lv.n,
        "mode": args.mode,
        "point": point.to_dict(),
        "closed_form": _c(closed),
        "state_sum": _c(state),
        "eq_mod_n": witness.equal,
        "phase_index": witness.phase_index,
        "sign": witness.sign,
        "error": witness.error,
    }
    if lv.n == 1 and args.mode == "complete":
        payload["volume"] = volume()
        payload["level_one_modulus"] = level_one_modulus(point)
    _emit(payload)
    if witness.equal:
        _ok(f"fig-8 N={lv.n}: state sum matches the closed form (k={witness.phase_index})", args.quiet)
        return 0
    _fail(f"fig-8 N={lv.n}: state sum and closed form differ (error {witness.error:.2e})")
    return 1


def cmd_holonomy(args) -> int:
    s = SurfaceMesh.load(args.file)
    rng = np.random.default_rng(args.seed)
    gens = dict(zip(s.generators, random_gauges(rng, len(s.generators))))
    z = SurfaceCocycle.decorate(gens, s.peripheral)
    params = surface_parameters(s, z)
    loops = args.loop or sorted(s.loops)
    holonomies = {name: holonomy_from_parameters(s, params, name) for name in loops}
    payload = {
        "parameters": {e: _c(w) for e, w in params.items()},
        "traces": {name: _c(h.trace()) for name, h in holonomies.items()},
    }
    ok = True
    if len(s.generators) == 2 and all(g in s.loops for g in s.generators):
        a, b = (holonomy_from_parameters(s, params, g) for g in s.generators)
        original = trace_invariants(*(gens[g] for g in s.generators))
        rebuilt = trace_invariants(a, b)
        error = max(abs(x - y) / max(1.0, abs(x)) for x, y in zip(original, rebuilt))
        ok = error <= args.eq_tol
        payload["round_trip"] = {"original": [_c(x) for x in original],
                                 "reconstructed": [_c(x) for x in rebuilt],
                                 "error": error, "ok": ok}
    _emit(payload)
    if ok:
        _ok(f"holonomy of {len(loops)} loops from {len(params)} edge parameters", args.quiet)
        return 0
    _fail("reconstructed holonomy does not match the cocycle")
    return 1


# ── Parser ───────────────────────────────────────────────────────────────────
def build_parser() -> argparse.ArgumentParser:
    from . import __version__

    parser = argparse.ArgumentParser(
        prog=config.CLI_NAME,
        description="qhgeom: quantum hyperbolic state sums on branched triangulations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "examples:\n"
            "  qhgeom validate qhgeom/data/fig8.json\n"
            "  qhgeom fig8 --N 3 --mode complete\n"
            "  qhgeom pentagon --N 3 --samples 50 --seed 7\n"
            f"\nVersion: {__version__}"
        ),
    )
    parser.add_argument("--version", action="version", version=f"qhgeom {__version__}")
    parser.add_argument("--verbose", action="store_true", help="log progress at INFO level")
    parser.add_argument("--debug", action="store_true", help="log everything")
    parser.add_argument("--quiet", action="store_true", help="no summary or progress bar on stderr")
    parser.add_argument("--tol", type=float, default=config.VALIDATION_TOL,
                        help=f"validation tolerance (default {config.VALIDATION_TOL})")
    parser.add_argument("--eq-tol", type=float, default=config.EQ_MOD_N_TOL,
                        help=f"tolerance of equality up to roots of unity (default {config.EQ_MOD_N_TOL})")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="random seed")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the edge, flattening, charge and quantum conditions")
    p.add_argument("file")
    p.add_argument("--N", type=int, default=3, help="level of the quantum check")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("flatten", help="solve for a global flattening")
    p.add_argument("file")
    p.add_argument("--weight", action="append", metavar="PATH=K",
                   help="prescribe the integer part K of a stored path's weight")
    p.add_argument("--output", help="write the flattened mesh here")
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("charge", help="solve for a global charge")
    p.add_argument("file")
    p.add_argument("--output", help="write the charged mesh here")
    p.set_defaults(func=cmd_charge)

    p = sub.add_parser("contract", help="contract the state sum of a mesh")
    p.add_argument("file")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--brute", action="store_true", help="compare with full state enumeration")
    p.set_defaults(func=cmd_contract)

    p = sub.add_parser("pentagon", help="pentagon identity on random 2-3 transits")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--samples", type=int, default=config.DEFAULT_SAMPLES)
    p.set_defaults(func=cmd_pentagon)

    p = sub.add_parser("fig8", help="figure-eight knot invariants")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--mode", choices=("complete", "deformed", "dehn"), default="complete")
    p.add_argument("--w2", type=float, nargs=2, default=(0.55, 0.9), metavar=("RE", "IM"),
                   help="modulus w2 of the deformed structure")
    p.add_argument("--pq", type=int, nargs=2, default=(5, 1), metavar=("P", "Q"), help="filling slope")
    p.add_argument("--rs", type=int, nargs=2, metavar=("R", "S"), help="completion with ps - qr = 1")
    p.set_defaults(func=cmd_fig8)

    p = sub.add_parser("holonomy", help="surface holonomy from edge parameters")
    p.add_argument("file")
    p.add_argument("--loop", action="append", help="loop name stored in the surface (default: all)")
    p.set_defaults(func=cmd_holonomy)
    return parser


def _configure_logging(args):
    logging.basicConfig(level=logging.WARNING, format='%(levelname)s: %(message)s')
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.verbose:
        logging.getLogger().setLevel(logging.INFO)
    elif args.quiet:
        logging.getLogger().setLevel(logging.ERROR)


def main(argv: Optional[List[str]] = None):
    """Main entry point; exits with 0 on success, 1 on failed checks, 2 on input errors"""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    try:
        code = args.func(args)
    except QHGError as e:
        _emit({"error": type(e).__name__, "message": str(e)})
        _fail(f"{type(e).__name__}: {e}")
        sys.exit(2)
    except Exception as e:
        _fail(f"Fatal error: {e}")
        logging.exception("Fatal error")
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    main()
