"""``mdecomp`` command-line front end.

Commands: ``material``, ``decompose``, ``fem``, ``locking``, ``bem``. Every
numeric output uses 17 significant digits, so runs are byte-reproducible.
Exit codes: 0 success, 1 numerical failure, 2 input error.

An optional ``--config FILE`` supplies ``key = value`` lines using the long
option names (``E``, ``nu``, ``scheme``, ``mesh``, ``bcs``, ...); command-line
flags take precedence.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from mdecomp import bem
from mdecomp.elasticity import compliance_law, constitutive_law, material_from
from mdecomp.energy import energy_split_from_strain
from mdecomp.fem import assembly, locking
from mdecomp.fem.element import SCHEMES, scheme_named
from mdecomp.fem.io import read_bcs, write_results
from mdecomp.fem.mesh import read_mesh
from mdecomp.fem.recovery import recover_fields
from mdecomp.tensor_core import (
    STRAIN,
    STRESS,
    VOIGT_LABELS,
    SymTensor2,
    Voigt6,
    decompose,
    from_voigt,
    invariants,
)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INPUT = 2

log = logging.getLogger("mdecomp")

# options a config file may set, with their types
_CONFIG_KEYS = {
    "E": float, "nu": float, "scheme": str, "mesh": str, "out": str, "tol": float,
    "bcs": str, "boundary": str, "points": str, "benchmark": str, "sizes": str,
    "min_distance": float,
}


class InputError(ValueError):
    """Invalid command-line or configuration input."""


def fmt(x) -> str:
    return format(float(x), ".17g")


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _open_out(path):
    return open(path, "w", newline="") if path else _Stdout()


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def read_config(path) -> dict:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"config file not found: {path}")
    cfg = {}
    for lineno, raw in enumerate(p.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or key not in _CONFIG_KEYS:
            raise InputError(f"{path}:{lineno}: expected 'key = value' with key in {sorted(_CONFIG_KEYS)}")
        try:
            cfg[key] = _CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
    return cfg


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, value)
    return args


def _material(args):
    if args.E is None or args.nu is None:
        raise InputError("--E and --nu are required")
    return material_from(args.E, args.nu)


def _existing(path, what):
    if path is None:
        raise InputError(f"--{what} is required")
    if not Path(path).is_file():
        raise InputError(f"{what} file not found: {path}")
    return path


def cmd_material(args) -> int:
    m = _material(args)
    C = constitutive_law(m)
    D = compliance_law(m)
    with _open_out(args.out) as out:
        w = _writer(out)
        w.writerow(["quantity", "value"])
        for name in ("E", "nu", "lam", "mu", "K"):
            w.writerow([name, fmt(getattr(m, name))])
        w.writerow(["residual_C", fmt(C.additivity_residual())])
        w.writerow(["residual_D", fmt(D.additivity_residual())])
        w.writerow(["matrix", "row", *VOIGT_LABELS])
        for label, law in (("C", C), ("D", D)):
            for part, suffix in (("full", ""), ("dev", "_dev"), ("vol", "_vol")):
                for a, row in enumerate(getattr(law, f"voigt_{part}")):
                    w.writerow([label + suffix, VOIGT_LABELS[a], *map(fmt, row)])
    return EXIT_OK


def _tensor_from_args(args) -> SymTensor2:
    if (args.stress is None) == (args.strain is None):
        raise InputError("give exactly one of --stress or --strain (six Voigt components)")
    kind, vals = (STRESS, args.stress) if args.stress is not None else (STRAIN, args.strain)
    v = np.array(vals, dtype=float)
    if not np.all(np.isfinite(v)):
        raise InputError("components must be finite")
    return from_voigt(Voigt6(v, kind))


def cmd_decompose(args) -> int:
    t = _tensor_from_args(args)
    d = decompose(t)
    inv = invariants(t)
    names = ("s", "p") if t.kind == STRESS else ("eps_dev", "eps_mean")
    with _open_out(args.out) as out:
        w = _writer(out)
        w.writerow(["quantity", *VOIGT_LABELS])
        w.writerow(["input", *map(fmt, t.components)])
        w.writerow([names[0], *map(fmt, d.dev.components)])
        w.writerow([names[1], *map(fmt, d.vol.components)])
        w.writerow(["quantity", "value"])
        w.writerow([names[1] + "_scalar", fmt(d.scalar)])
        w.writerow(["I1", fmt(inv.I1)])
        w.writerow(["J2", fmt(inv.J2)])
        w.writerow(["J3", fmt(inv.J3)])
        if t.kind == STRAIN and args.E is not None and args.nu is not None:
            e = energy_split_from_strain(constitutive_law(_material(args)), t)
            for name in ("total", "dev", "vol"):
                w.writerow([f"u_{name}", fmt(getattr(e, name))])
    return EXIT_OK


def cmd_fem(args) -> int:
    m = _material(args)
    mesh = read_mesh(_existing(args.mesh, "mesh"))
    bcs = read_bcs(_existing(args.bcs, "bcs"))
    scheme = scheme_named(args.scheme or "full")
    law = constitutive_law(m)
    system = assembly.assemble(mesh, law, scheme, bcs)
    rtol = 1e-10 if args.tol is None else args.tol
    u = assembly.solve(system, rtol=rtol)
    fields = recover_fields(mesh, u, law, scheme)
    if args.out:
        write_results(fields, args.out)
    umax = np.abs(u).max()
    print(f"fem: {mesh.n_elements} elements, {scheme.name}, max|u| = {fmt(umax)}, "
          f"energy dev = {fmt(fields.energy_dev)}, vol = {fmt(fields.energy_vol)}")
    return EXIT_OK


def _parse_sizes(text, benchmark):
    if text is None:
        return None
    sizes = []
    for tok in str(text).replace(",", " ").split():
        if benchmark == locking.CANTILEVER:
            nx, sep, ny = tok.partition("x")
            if not sep:
                raise InputError(f"cantilever sizes are 'NXxNY', got {tok!r}")
            sizes.append((int(nx), int(ny)))
        else:
            sizes.append(int(tok.split("x")[0]))
    if not sizes or any(np.any(np.array(s) < 1) for s in sizes):
        raise InputError("mesh sizes must be positive")
    return sizes


def cmd_locking(args) -> int:
    benchmark = args.benchmark or locking.BLOCK
    if benchmark not in (locking.BLOCK, locking.CANTILEVER):
        raise InputError(f"unknown benchmark {benchmark!r}")
    schemes = [args.scheme] if args.scheme else list(SCHEMES)
    for s in schemes:
        scheme_named(s)
    try:
        sizes = _parse_sizes(args.sizes, benchmark)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if benchmark == locking.BLOCK and args.nu is not None and args.nu > 0.4999:
        raise InputError("block benchmark needs nu <= 0.4999")
    rows = locking.locking_study(benchmark, schemes, sizes, args.nu)
    if args.out:
        locking.write_report(rows, args.out)
    for r in rows:
        print(f"{benchmark} {r.scheme} {r.mesh}: monitored = {fmt(r.monitored_disp)}, "
              f"rel_error = {fmt(r.rel_error)}")
    return EXIT_OK


def cmd_bem(args) -> int:
    m = _material(args)
    boundary = bem.read_boundary(_existing(args.boundary, "boundary"))
    points = bem.read_points(_existing(args.points, "points"))
    rows = bem.evaluate_points(points, boundary, bem.kelvin_kernels_2d(m), args.min_distance)
    if args.out:
        bem.write_results(rows, args.out)
    print(f"bem: evaluated {len(rows)} interior points")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdecomp", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, material=True):
        p.add_argument("--config", help="key = value file; flags win")
        p.add_argument("--out", help="output CSV path (stdout for material/decompose)")
        if material:
            p.add_argument("--E", type=float, help="Young's modulus")
            p.add_argument("--nu", type=float, help="Poisson's ratio")
        return p

    p = common(sub.add_parser("material", help="moduli and Voigt laws with their split"))
    p.set_defaults(func=cmd_material)

    p = common(sub.add_parser("decompose", help="split one stress or strain"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--stress", type=float, nargs=6, metavar="S")
    g.add_argument("--strain", type=float, nargs=6, metavar="E",
                   help="Voigt order 11 22 33 12 23 31, engineering shear")
    p.set_defaults(func=cmd_decompose)

    p = common(sub.add_parser("fem", help="solve a mesh and write Gauss-point results"))
    p.add_argument("--mesh")
    p.add_argument("--bcs", help="boundary-condition file (fix/load lines)")
    p.add_argument("--scheme", choices=sorted(SCHEMES))
    p.add_argument("--tol", type=float, help="relative residual tolerance")
    p.set_defaults(func=cmd_fem)

    p = common(sub.add_parser("locking", help="locking benchmark report"), material=False)
    p.add_argument("--benchmark", choices=(locking.BLOCK, locking.CANTILEVER))
    p.add_argument("--nu", type=float)
    p.add_argument("--scheme", choices=sorted(SCHEMES), help="single scheme (default all)")
    p.add_argument("--sizes", help="block: '8,16'; cantilever: '100x1,200x2'")
    p.set_defaults(func=cmd_locking, E=None)

    p = common(sub.add_parser("bem", help="decomposed interior fields from boundary data"))
    p.add_argument("--boundary")
    p.add_argument("--points")
    p.add_argument("--min-distance", dest="min_distance", type=float)
    p.set_defaults(func=cmd_bem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(_merge_config(args))
    except assembly.SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
