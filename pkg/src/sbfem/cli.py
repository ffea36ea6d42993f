"""Run orchestration: frequency sweeps, convergence studies, CSV artifacts.

Usage::

    python -m sbfem run.yaml -o out/
    sbfem-run run.yaml --serial -v

Exit status is 0 on success, 2 for an invalid configuration and 3 when a
numerical step fails.
"""

import argparse
import csv
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import CONFIG_DIR, ConfigError, RunConfig, load_config
from .geometry import boundary_point
from .halfspace import HalfspaceProblem, NonConvergence, surface_curve
from .material import pressure_wavelength
from .mesh import surface_nodes
from .recovery import field_points, recover_all, write_field_csv, write_snapshot_csv, write_surface_csv
from .solver import (
    LoadCase,
    apply_symmetry_constraints,
    assemble_global,
    condense_subdomain,
    solve,
    strip_load_vector,
)

log = logging.getLogger("sbfem")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class RunError(RuntimeError):
    """A numerical failure, tagged with the frequency and subdomain."""


@dataclass
class FrequencyResult:
    frequency: float
    ndofs: int
    x: np.ndarray
    v: np.ndarray
    v_analytic: np.ndarray = None
    timings: dict = field(default_factory=dict)
    files: list = field(default_factory=list)

    @property
    def sse(self):
        """Sum of squared errors of real and imaginary parts."""
        if self.v_analytic is None:
            return None
        return float(np.sum(np.abs(self.v - self.v_analytic) ** 2))

    @property
    def rel_l2(self):
        if self.v_analytic is None:
            return None
        return float(np.linalg.norm(self.v - self.v_analytic) / np.linalg.norm(self.v_analytic))


def bundled_config(name="halfspace-15hz"):
    """Path of a configuration shipped with the package."""
    path = CONFIG_DIR / f"{name}.yaml"
    if not path.exists():
        raise FileNotFoundError(f"no bundled config {name!r}")
    return path


def solve_frequency(cfg: RunConfig, frequency, mesh=None):
    """Condense, assemble and solve at one frequency, plus the analytic curve.

    Returns ``(result, mesh, condensations, u)``.
    """
    if mesh is None:
        mesh = cfg.build_mesh()
    omega = 2.0 * np.pi * frequency
    timings = {}
    t0 = time.perf_counter()
    cons = []
    for k, s in enumerate(mesh.subdomains):
        try:
            cons.append(condense_subdomain(s, omega, store=False))
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            raise RunError(f"{frequency:g} Hz, subdomain {k} ({s.name}): {exc}") from exc
    timings["condense"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        system = assemble_global(cons, mesh)
        system.f = strip_load_vector(mesh, LoadCase(cfg.p0, cfg.b, omega))
        if cfg.symmetry:
            system = apply_symmetry_constraints(system, mesh.coords())
        u = solve(system)
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        raise RunError(f"{frequency:g} Hz, global solve: {exc}") from exc
    timings["solve"] = time.perf_counter() - t0

    index = {nid: k for k, nid in enumerate(mesh.node_ids)}
    sn = surface_nodes(mesh)
    x = mesh.coords(sn)[:, 0]
    v = np.array([u[2 * index[i] + 1] for i in sn])
    result = FrequencyResult(frequency, system.ndofs, x, v, timings=timings)

    if cfg.oracle:
        t0 = time.perf_counter()
        problem = HalfspaceProblem(cfg.material, cfg.p0, cfg.b, frequency)
        try:
            result.v_analytic = surface_curve(problem, x)
        except (ArithmeticError, ValueError, NonConvergence) as exc:
            raise RunError(f"{frequency:g} Hz, analytic oracle: {exc}") from exc
        timings["oracle"] = time.perf_counter() - t0
    return result, mesh, cons, u


def _tag(f):
    return f"{f:g}Hz"


def _export(cfg, out, result, mesh, cons, u):
    tag = _tag(result.frequency)
    if cfg.surface:
        path = out / f"surface_{tag}.csv"
        write_surface_csv(path, result.x, result.v)
        result.files.append(path)
        if result.v_analytic is not None:
            path = out / f"analytic_{tag}.csv"
            write_surface_csv(path, result.x, result.v_analytic)
            result.files.append(path)
    if cfg.field_output:
        t0 = time.perf_counter()
        solution = recover_all(mesh, cons, u, cfg.field_subdomains)
        parts = [field_points(solution[k], cfg.refine) for k in sorted(solution.fields)]
        xy = np.concatenate([p[0] for p in parts])
        vals = np.concatenate([p[1] for p in parts])
        path = out / f"field_{tag}.csv"
        write_field_csv(path, xy, vals)
        result.files.append(path)
        for phi in cfg.phases:
            path = out / f"field_{tag}_phase{phi:g}.csv"
            write_snapshot_csv(path, xy, vals, phi)
            result.files.append(path)
        result.timings["recover"] = time.perf_counter() - t0


def _one(cfg, out, frequency):
    log.info("solving %g Hz", frequency)
    result, mesh, cons, u = solve_frequency(cfg, frequency)
    _export(cfg, out, result, mesh, cons, u)
    log.info("%g Hz done in %.2f s", frequency, sum(result.timings.values()))
    return result


def run(cfg: RunConfig, output_dir=".", threads=None, serial=False):
    """Solve every configured frequency and write the artifacts.

    Frequencies run concurrently on a thread pool unless ``serial``. Each
    output file has exactly one writer. Returns the per-frequency results
    in configuration order; ``summary.txt`` is written last.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    freqs = cfg.frequencies
    if serial or len(freqs) == 1:
        results = [_one(cfg, out, f) for f in freqs]
    else:
        workers = threads or min(len(freqs), os.cpu_count() or 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda f: _one(cfg, out, f), freqs))

    table = None
    if cfg.convergence is not None:
        table = convergence_study(cfg, cfg.convergence["axis"], cfg.convergence["values"])
        path = out / f"convergence_{cfg.convergence['axis']}.csv"
        write_convergence_csv(path, table)

    text = summary(cfg, results, table)
    (out / "summary.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return results


def summary(cfg, results, table=None):
    lines = [f"config: {cfg.source}", f"subdomains: {len(cfg.mesh_spec.get('subdomains', [])) or 'halfspace'}"]
    for r in results:
        t = ", ".join(f"{k} {v:.2f}s" for k, v in r.timings.items())
        line = f"{r.frequency:g} Hz: {r.ndofs} dofs; {t}"
        if r.sse is not None:
            line += f"; SSE {r.sse:.6e}; relative L2 {r.rel_l2:.4%}"
        lines.append(line)
    if table:
        lines.append("convergence (frequency, value, per wavelength, SSE):")
        lines.extend(f"  {f:g} {v} {p:.2f} {e:.6e}" for f, v, p, e in table)
    return "\n".join(lines) + "\n"


def longest_radial_distance(mesh, samples=9):
    """Longest physical length of a radial line over all subdomains.

    For a boundary point ``x_p`` the radial line covers
    ``|x_p - x_c| * |xi_end - xi_start|``.
    """
    best = 0.0
    for s in mesh.subdomains:
        span = abs(s.radial.xi_end - s.radial.xi_start)
        for el in s.elements:
            for eta in np.linspace(-1.0, 1.0, samples):
                r = np.linalg.norm(boundary_point(el, eta)[0] - s.center)
                best = max(best, r * span)
    return best


def longest_element(mesh):
    return max(el.length() for el in mesh.elements())


def steps_per_wavelength(n_steps, wavelength, radial_length):
    return n_steps * wavelength / radial_length


def points_per_wavelength(points, wavelength, element_length):
    return points * wavelength / element_length


def convergence_study(cfg: RunConfig, axis, values, frequencies=None):
    """Error of the surface response against the analytic curve.

    ``axis`` is ``"radial_steps"`` (every subdomain gets ``value`` steps)
    or ``"gll_points"`` (points per element). Returns rows
    ``(frequency, value, per_wavelength, sse)``.
    """
    if not cfg.oracle:
        raise ConfigError("a convergence study needs the analytic oracle")
    if axis not in ("radial_steps", "gll_points"):
        raise ConfigError(f"unknown convergence axis {axis!r}")
    values = list(values)
    if any(b <= a for a, b in zip(values[:-1], values[1:])):
        raise ConfigError("convergence values must be strictly increasing")
    rows = []
    for f in frequencies or cfg.frequencies:
        lam = pressure_wavelength(cfg.material, f)
        for v in values:
            if axis == "radial_steps":
                mesh = cfg.build_mesh(n_steps=v)
                per = steps_per_wavelength(v, lam, longest_radial_distance(mesh))
            else:
                mesh = cfg.build_mesh(gll_points=v)
                per = points_per_wavelength(v, lam, longest_element(mesh))
            result = solve_frequency(cfg, f, mesh)[0]
            log.info("%s %d at %g Hz: SSE %.4e", axis, v, f, result.sse)
            rows.append((f, v, per, result.sse))
    return rows


def write_convergence_csv(path, table):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["frequency", "value", "per_wavelength", "sse"])
        for f, v, p, e in table:
            w.writerow([repr(float(f)), v, repr(float(p)), repr(float(e))])


def build_parser():
    p = argparse.ArgumentParser(prog="sbfem-run", description=__doc__.splitlines()[0])
    p.add_argument("config", help="YAML run configuration")
    p.add_argument("-o", "--output-dir", default=".", help="directory for CSV files and summary.txt")
    p.add_argument("--threads", type=int, default=None, help="worker threads for the frequency sweep")
    p.add_argument("--serial", action="store_true", help="solve frequencies one after another")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        run(cfg, args.output_dir, threads=args.threads, serial=args.serial)
    except ConfigError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RunError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
