"""Command-line interface: reproduction runs and verification suites.

Every command prints one PASS/FAIL line per check (measured value and
tolerance, 12 significant digits), writes its CSV artifact when --out is
given, and exits 0 only if all checks pass (2 on bad arguments).  Output is
byte-identical for identical (config, seed, workers); no timestamps appear
in artifacts.  A flat ``key = value`` config file can supply any flag's
value; explicit flags win.
"""

import argparse
import math
import sys

from . import disk, kriging, lattice
from .contrasts import LATTICE, from_pairs, read_contrast
from .errors import DewijsError

_UNSET = object()


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


class CheckList:
    def __init__(self):
        self.lines = []

    def add(self, name, passed, measured, tolerance):
        self.lines.append((name, bool(passed), measured, tolerance))

    def report(self, stream=None):
        stream = stream if stream is not None else sys.stdout
        for name, passed, measured, tol in self.lines:
            verdict = "PASS" if passed else "FAIL"
            stream.write(
                f"{verdict} {name} measured={_fmt(measured)} tol={_fmt(tol)}\n"
            )

    @property
    def ok(self):
        return all(p for _, p, _, _ in self.lines)

    def trailer(self):
        return [
            f"# {'PASS' if p else 'FAIL'} {n} measured={_fmt(m)} tol={_fmt(t)}"
            for n, p, m, t in self.lines
        ]


def _write_artifact(path, header, rows, checks):
    """CSV artifact: header, data rows, then check trailer comments."""
    if path is None:
        return
    try:
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
            for line in checks.trailer():
                fh.write(line + "\n")
    except OSError:
        raise
    except Exception as exc:  # flush what we have, marked failed
        with open(path, "a") as fh:
            fh.write(f"# FAILED {exc}\n")
        raise


def _parse_point(text):
    try:
        x, y = (float(v) for v in text.split(","))
        return (x, y)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected 'x,y' coordinates, got {text!r}"
        ) from exc


def _load_config(path):
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _resolve(args, config, name, default, convert):
    value = getattr(args, name, _UNSET)
    if value is not _UNSET and value is not None:
        return value
    if name in config:
        return convert(config[name])
    return default


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_table1(args, config):
    half = _resolve(args, config, "grid_half_width", 8, int)
    tol = _resolve(args, config, "tol", 0.001, float)
    out = _resolve(args, config, "out", None, str)
    result = kriging.reproduce_table1(half)
    checks = CheckList()
    if result.max_abs_error is not None:
        checks.add("table1-max-abs-error", result.max_abs_error <= tol,
                   result.max_abs_error, tol)
    checks.add("weights-sum-to-one", abs(result.weight_sum - 1.0) <= 1e-10,
               abs(result.weight_sum - 1.0), 1e-10)
    checks.add("orbit-spread", result.orbit_spread < 1e-8,
               result.orbit_spread, 1e-8)
    rows = []
    for (s, t), w in sorted(result.entries.items()):
        row = [s, t, w, f"{w:.3f}"]
        if result.reference_errors:
            row += [kriging.REFERENCE_COEFFICIENTS[(s, t)],
                    result.reference_errors[(s, t)]]
        rows.append(row)
    header = "s,t,weight,weight_3dec" + (
        ",reference,abs_error" if result.reference_errors else "")
    _write_artifact(out, header, rows, checks)
    sys.stdout.write(kriging.table1_layout(result))
    checks.report()
    return checks


def _cmd_hitting(args, config):
    x0 = _resolve(args, config, "x0", (0.5, 0.0), _parse_point)
    n = _resolve(args, config, "n", 100_000, int)
    method = _resolve(args, config, "method", "wos", str)
    step = _resolve(args, config, "step", 1e-4, float)
    bins = _resolve(args, config, "bins", 36, int)
    seed = _resolve(args, config, "seed", 0, int)
    workers = _resolve(args, config, "workers", 1, int)
    out = _resolve(args, config, "out", None, str)
    dist = disk.sample_hitting(x0, n, method=method, seed=seed,
                               workers=workers, step=step)
    counts, edges = dist.histogram(bins)
    expected, _ = disk.expected_bin_counts(x0, n, bins)
    stat = disk.chi_square_statistic(counts, expected)
    threshold = disk.chi_square_threshold(bins)
    checks = CheckList()
    checks.add("chi-square-99.9pct", stat < threshold, stat, threshold)
    rows = [(edges[i], edges[i + 1], int(counts[i]), expected[i])
            for i in range(bins)]
    _write_artifact(out, "bin_start,bin_end,count,expected", rows, checks)
    checks.report()
    return checks


def _cmd_poisson_check(args, config):
    pairs = _resolve(args, config, "pairs", 50, int)
    seed = _resolve(args, config, "seed", 0, int)
    out = _resolve(args, config, "out", None, str)
    segments = _resolve(args, config, "segments", 0, int)
    x0_flag = _resolve(args, config, "x0", (0.5, 0.0), _parse_point)
    from .rng import generator_for, worker_bit_generators
    gen = generator_for(worker_bit_generators(seed, 1)[0])
    rows = []
    worst_norm = 0.0
    worst_harm = 0.0
    for i in range(pairs):
        r = 0.85 * math.sqrt(gen.random())
        phi = 2.0 * math.pi * gen.random()
        x0 = (r * math.cos(phi), r * math.sin(phi))
        ry = 1.0 if i % 2 == 0 else 1.0 + 2.0 * gen.random()
        py = 2.0 * math.pi * gen.random()
        y = (ry * math.cos(py), ry * math.sin(py))
        norm_err = abs(disk.poisson_normalization(x0) - 1.0)
        harm = disk.harmonic_identity_check(x0, y)
        worst_norm = max(worst_norm, norm_err)
        worst_harm = max(worst_harm, harm)
        rows.append((x0[0], x0[1], y[0], y[1], norm_err, harm))
    checks = CheckList()
    checks.add("poisson-normalization", worst_norm <= 1e-10, worst_norm, 1e-10)
    checks.add("harmonic-identity", worst_harm < 1e-6, worst_harm, 1e-6)
    if segments:
        result = disk.discretized_circle_kriging(x0_flag, segments)
        sum_err = abs(result.solution.weight_sum - 1.0)
        checks.add("segment-weights-sum-to-one", sum_err <= 1e-10, sum_err,
                   1e-10)
        seg_rows = [
            (j, result.edges[j], result.edges[j + 1],
             float(result.weights[j]), float(result.poisson_integrals[j]))
            for j in range(segments)
        ]
        _write_artifact(out, "segment,theta_start,theta_end,weight,poisson_integral",
                        seg_rows, checks)
    else:
        _write_artifact(out,
                        "x0_x,x0_y,y_x,y_y,normalization_error,harmonic_residual",
                        rows, checks)
    checks.report()
    return checks


def _cmd_lattice_check(args, config):
    box = _resolve(args, config, "box", 5, int)
    n_random = _resolve(args, config, "random_domains", 0, int)
    cells = _resolve(args, config, "cells", 20, int)
    seed = _resolve(args, config, "seed", 0, int)
    out = _resolve(args, config, "out", None, str)
    domains = [(f"box{box}", lattice.box_domain(box))]
    for i in range(n_random):
        domains.append(
            (f"random{i}", lattice.random_simply_connected_domain(cells, seed + i))
        )
    max_span = max(dom.diameter() for _, dom in domains)
    table = lattice.potential_kernel(min(64, max_span + 1))
    rows = []
    worst = 0.0
    for label, dom in domains:
        for x in dom.interior_order:
            dev = lattice.dynkin_crosscheck(dom, x, table)
            worst = max(worst, dev)
            rows.append((label, x[0], x[1], dev))
    checks = CheckList()
    checks.add("dynkin-weights-vs-hitting", worst < 1e-8, worst, 1e-8)
    _write_artifact(out, "domain,x,y,deviation", rows, checks)
    checks.report()
    return checks


def _cmd_potential(args, config):
    max_lag = _resolve(args, config, "max_lag", 16, int)
    out = _resolve(args, config, "out", None, str)
    table = lattice.potential_kernel(max_lag)
    residual = table.laplacian_residual()
    checks = CheckList()
    checks.add("laplacian-identity", residual < 1e-10, residual, 1e-10)
    checks.add("zero-at-origin", table.lookup(0, 0) == 0.0,
               table.lookup(0, 0), 0.0)
    rows = [(s, t, table.lookup(s, t))
            for s in range(-max_lag, max_lag + 1)
            for t in range(-max_lag, max_lag + 1)]
    _write_artifact(out, "s,t,a", rows, checks)
    checks.report()
    return checks


def _cmd_occupation(args, config):
    horizon = _resolve(args, config, "horizon", 100_000, int)
    n = _resolve(args, config, "n", 1_000_000, int)
    seed = _resolve(args, config, "seed", 0, int)
    workers = _resolve(args, config, "workers", 1, int)
    tol = _resolve(args, config, "tol", 0.05, float)
    out = _resolve(args, config, "out", None, str)
    sigma_file = _resolve(args, config, "sigma_file", None, str)
    nu_file = _resolve(args, config, "nu_file", None, str)
    default_pairs = [((0, 0), 1.0), ((1, 0), -1.0)]
    if sigma_file:
        with open(sigma_file) as fh:
            sigma = read_contrast(fh)
    else:
        sigma = from_pairs(default_pairs, space=LATTICE)
    if nu_file:
        with open(nu_file) as fh:
            nu = read_contrast(fh)
    else:
        nu = from_pairs(default_pairs, space=LATTICE)
    result = lattice.occupation_identity_check(
        sigma, nu, horizon, n, seed=seed, workers=workers)
    checks = CheckList()
    checks.add("occupation-vs-kernel", result.relative_error < tol,
               result.relative_error, tol)
    rows = [
        ("estimate", result.estimate),
        ("kernel_value", result.kernel_value),
        ("relative_error", result.relative_error),
        ("calibration", result.calibration),
        ("horizon", result.horizon),
        ("n_walks", result.n_walks),
    ]
    _write_artifact(out, "quantity,value", rows, checks)
    checks.report()
    return checks


_COMMANDS = {
    "table1": _cmd_table1,
    "hitting": _cmd_hitting,
    "poisson-check": _cmd_poisson_check,
    "lattice-check": _cmd_lattice_check,
    "potential": _cmd_potential,
    "occupation": _cmd_occupation,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dewijs",
        description="de Wijs kriging reproduction and Markov-property checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", default=None,
                       help="flat key = value file; flags override it")
        p.add_argument("--seed", type=int, default=_UNSET)
        p.add_argument("--workers", type=int, default=_UNSET)
        p.add_argument("--out", default=_UNSET, help="CSV artifact path")

    p = sub.add_parser("table1", help="reproduce the 17x17 cell kriging table")
    p.add_argument("--grid-half-width", type=int, default=_UNSET)
    p.add_argument("--tol", type=float, default=_UNSET)
    add_common(p)

    p = sub.add_parser("hitting", help="sample hitting angles and test them")
    p.add_argument("--x0", type=_parse_point, default=_UNSET)
    p.add_argument("--n", type=int, default=_UNSET)
    p.add_argument("--method", choices=["wos", "euler"], default=_UNSET)
    p.add_argument("--step", type=float, default=_UNSET)
    p.add_argument("--bins", type=int, default=_UNSET)
    add_common(p)

    p = sub.add_parser("poisson-check",
                       help="normalization and mean-value identity checks")
    p.add_argument("--pairs", type=int, default=_UNSET)
    p.add_argument("--segments", type=int, default=_UNSET,
                   help="also krige x0 from this many arc segments; the "
                        "artifact becomes the segment-weights CSV")
    p.add_argument("--x0", type=_parse_point, default=_UNSET,
                   help="target for the segment kriging")
    add_common(p)

    p = sub.add_parser("lattice-check",
                       help="kriging weights vs hitting probabilities")
    p.add_argument("--box", type=int, default=_UNSET)
    p.add_argument("--all-interior", action="store_true",
                   help="accepted for symmetry; every interior point is checked")
    p.add_argument("--random-domains", type=int, default=_UNSET)
    p.add_argument("--cells", type=int, default=_UNSET)
    add_common(p)

    p = sub.add_parser("potential", help="emit the potential kernel table")
    p.add_argument("--max-lag", type=int, default=_UNSET)
    add_common(p)

    p = sub.add_parser("occupation",
                       help="occupation-time Monte Carlo vs kernel value")
    p.add_argument("--horizon", "--T", dest="horizon", type=int, default=_UNSET)
    p.add_argument("--n", type=int, default=_UNSET)
    p.add_argument("--tol", type=float, default=_UNSET)
    p.add_argument("--sigma-file", default=_UNSET)
    p.add_argument("--nu-file", default=_UNSET)
    add_common(p)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {}
    if args.config:
        try:
            config = _load_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    try:
        checks = _COMMANDS[args.command](args, config)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except DewijsError as exc:
        sys.stderr.write(f"FAILED {exc}\n")
        return 1
    return 0 if checks.ok else 1


if __name__ == "__main__":
    sys.exit(main())
