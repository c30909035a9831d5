"""Command-line driver: ``mcharlier <command> [flags]``.

Exit codes: 0 success, 1 an invariant check failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any, Sequence

from . import core, limits, ortho, zeros
from .core import MultiIndex, ParameterSet, ResourceLimitError, ValidationError

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2
CONTOUR_MAX_DEGREE = 20
CONTOUR_RTOL = 1e-6
COMPLEX_RTOL = 1e-9


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _split(value) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, (int, float)):
        return [value]
    return [v for v in str(value).split(",") if v.strip()]


def parse_index(value) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in _split(value))
    except ValueError as exc:
        raise UsageError(f"bad multi-index {value!r}") from exc


def parse_rationals(value) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(str(v).strip()) for v in _split(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number list {value!r}") from exc


def parse_point(value):
    """``"re"`` gives an exact rational, ``"re,im"`` a complex number."""
    parts = _split(value)
    try:
        if len(parts) == 1:
            return Fraction(str(parts[0]).strip())
        if len(parts) == 2:
            re, im = (float(Fraction(str(p).strip())) for p in parts)
            return complex(re, im) if im != 0 else Fraction(str(parts[0]).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point {value!r}") from exc
    raise UsageError(f"point must be 're' or 're,im', got {value!r}")


@dataclass
class ExperimentConfig:
    n: tuple[int, ...] | None = None
    a: tuple[Fraction, ...] | None = None
    q: tuple[float, ...] | None = None
    t: float = 1.0
    N: int = 1
    x: Any = None
    k: int | None = None
    scaled_last: bool = False
    sweep: tuple[int, ...] = (10, 20, 40)
    tol: float = zeros.DEFAULT_TOL
    points: int = 201
    format: str = "csv"
    out: str | None = None

    def params(self) -> ParameterSet:
        if self.a is None:
            raise UsageError("--a is required")
        return ParameterSet(self.a, self.scaled_last)

    def index(self) -> MultiIndex:
        if self.n is None:
            raise UsageError("--n is required")
        n = MultiIndex(self.n)
        if self.a is not None and n.r != len(self.a):
            raise UsageError(f"--n has {n.r} entries but --a has {len(self.a)}")
        return n

    def regime(self) -> limits.RegimeParams:
        params = self.params()
        q = self.q if self.q is not None else (1 / params.r,) * params.r
        return limits.RegimeParams(self.t, q, params)

    def point(self):
        if self.x is None:
            raise UsageError("--x is required")
        return self.x


_PARSERS = {
    "n": parse_index,
    "a": parse_rationals,
    "q": lambda v: tuple(float(f) for f in parse_rationals(v)),
    "t": lambda v: float(Fraction(str(v))),
    "N": int,
    "x": parse_point,
    "k": int,
    "scaled_last": bool,
    "sweep": parse_index,
    "tol": float,
    "points": int,
    "format": str,
    "out": str,
}


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge ``--config`` file values with flags; flags win."""
    raw: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    for f in fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is not None and value is not False:
            raw[f.name] = value
    unknown = set(raw) - {f.name for f in fields(ExperimentConfig)}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    cfg = ExperimentConfig()
    for key, value in raw.items():
        try:
            setattr(cfg, key, _PARSERS[key](value))
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad value for {key}: {value!r}") from exc
    if cfg.format not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {cfg.format!r}")
    if not cfg.tol > 0:
        raise UsageError("--tol must be positive")
    return cfg


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class Report:
    """Tabular result plus free-form metadata, rendered as CSV or JSON."""

    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.rows: list[dict] = []
        self.meta: dict[str, Any] = {}

    def add(self, **row):
        self.rows.append(row)

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            payload = dict(self.meta)
            payload["rows"] = [{c: row.get(c) for c in self.columns} for row in self.rows]
            return json.dumps(_jsonable(payload), indent=2) + "\n"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(row.get(c)) for c in self.columns])
        return buf.getvalue()


def emit(report: Report, cfg: ExperimentConfig, stdout) -> None:
    text = report.render(cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def _notes(report: Report, cfg: ExperimentConfig, stderr) -> None:
    # CSV stays purely tabular; diagnostics go to stderr
    if cfg.format == "csv":
        for key, value in report.meta.items():
            stderr.write(f"# {key}: {json.dumps(_jsonable(value))}\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_eval(cfg: ExperimentConfig) -> tuple[Report, int]:
    n, params, x, N = cfg.index(), cfg.params(), cfg.point(), cfg.N
    exact = not isinstance(x, complex)
    report = Report(["evaluator", "value", "value_float", "status"])
    results: dict[str, Any] = {}

    def run(name, fn):
        try:
            results[name] = fn()
        except (ResourceLimitError, ValidationError) as exc:
            report.add(evaluator=name, status=f"skipped: {exc}")
            return
        value = results[name]
        report.add(evaluator=name, value=value if exact or name == "contour" else None,
                   value_float=complex(value) if isinstance(value, complex) else float(value))

    run("explicit", lambda: core.eval_explicit(n, params, x, N=N))
    run("rodrigues", lambda: core.eval_rodrigues(n, params, x, N=N))

    def via_recurrence():
        # C_n(x) = N^|n| P_{n,N}(x / N)
        handle = core.ScaledPolynomialHandle(n, params, N)
        scaled = handle(x / N, exact=exact)
        return scaled * Fraction(N) ** n.size if exact else scaled * N**n.size

    run("recurrence", via_recurrence)
    run("generating", lambda: core.generating_coefficient(n, params, x, N=N))
    if exact and n.r <= core.CONTOUR_MAX_DIM and n.size <= CONTOUR_MAX_DEGREE:
        run("contour", lambda: core.contour_integral_eval(n, params, float(x), N=N))
    else:
        report.add(evaluator="contour", status="skipped: needs real x, r <= 2, |n| <= 20")

    reference = results["explicit"]
    agree = True
    for row in report.rows:
        name = row["evaluator"]
        if name not in results:
            continue
        value = results[name]
        if name == "contour":
            ok = abs(value - float(reference)) <= CONTOUR_RTOL * max(1.0, abs(float(reference)))
        elif exact:
            ok = value == reference
        else:
            ok = abs(value - reference) <= COMPLEX_RTOL * max(1.0, abs(reference))
        row["status"] = "agree" if ok else "DISAGREE"
        agree &= ok
    report.meta.update(n=list(n), a=list(params.a), x=x, N=N, agree=agree)
    if not exact and "value_float" in report.columns:
        report.columns = ["evaluator", "value_float", "status"]
    return report, EXIT_OK if agree else EXIT_INVARIANT


def cmd_zeros(cfg: ExperimentConfig) -> tuple[Report, int]:
    n, params, N = cfg.index(), cfg.params(), cfg.N
    zs = zeros.find_zeros(n, params, N, cfg.tol)
    report = Report(["index", "zero", "scaled_zero"])
    for i, z in enumerate(zs.zeros, start=1):
        report.add(index=i, zero=z, scaled_zero=z / N)
    checks = zs.invariants()
    checks["count"] = len(zs) == n.size
    report.meta.update(n=list(n), N=N, width=zs.width, invariants=checks)
    return report, EXIT_OK if all(checks.values()) else EXIT_INVARIANT


def histogram(atoms: Sequence[float], support_end: float, degree: int):
    bins = max(1, math.ceil(2 * math.sqrt(degree)))
    width = support_end / bins
    top = max(max(atoms), support_end)
    while bins * width < top:
        bins += 1
    counts = [0] * bins
    for y in atoms:
        counts[min(bins - 1, max(0, int(y // width)))] += 1
    return [(i * width, (i + 1) * width, c) for i, c in enumerate(counts)]


def cmd_zerodist(cfg: ExperimentConfig) -> tuple[Report, int]:
    regime = cfg.regime()
    law = limits.limit_law(regime)
    params = regime.params
    support_end = max(hi for _, hi in law.support)
    report = Report(["m", "n", "N", "row", "bin_left", "bin_right",
                     "empirical_density", "theoretical_density", "ks_distance"])
    status = EXIT_OK
    ks_values = []
    for m in cfg.sweep:
        n = regime.multi_index(m)
        N = regime.scaling(m)
        label = ";".join(map(str, n))
        zs = zeros.find_zeros(n, params, N, cfg.tol)
        if len(zs) != n.size or not all(zs.invariants().values()):
            status = EXIT_INVARIANT
        measure = zeros.empirical_measure(zs)
        for lo, hi, count in histogram(measure.atoms, support_end, n.size):
            report.add(m=m, n=label, N=N, row="bin", bin_left=lo, bin_right=hi,
                       empirical_density=count / (n.size * (hi - lo)),
                       theoretical_density=(law.cdf(hi) - law.cdf(lo)) / (hi - lo))
        ks = zeros.ks_distance(measure, law.cdf)
        ks_values.append(ks)
        report.add(m=m, n=label, N=N, row="summary", ks_distance=ks)
    report.meta.update(kind=law.kind, support=[list(s) for s in law.support], ks=ks_values)
    return report, status


def cmd_ratio(cfg: ExperimentConfig) -> tuple[Report, int]:
    regime = cfg.regime()
    params = regime.params
    x = complex(cfg.point())
    ks = range(params.r) if cfg.k is None else [cfg.k - 1]
    report = Report(["m", "k", "N", "ratio_re", "ratio_im", "limit_re", "limit_im",
                     "error", "bound_lhs", "bound_rhs", "bound_ok"])
    status = EXIT_OK
    for m in cfg.sweep:
        n = regime.multi_index(m)
        N = regime.scaling(m)
        for k in ks:
            ratio = limits.empirical_ratio(n, params, N, k, x)
            if regime.varying:
                limit = limits.ratio_limit_varying(x, regime, k)
                bound = None
            else:
                limit = limits.ratio_limit_fixed(x, regime.t)
                bound = limits.ratio_bound_fixed(n, params, N, k, x)
                if not bound.holds:
                    status = EXIT_INVARIANT
            report.add(m=m, k=k + 1, N=N, ratio_re=ratio.real, ratio_im=ratio.imag,
                       limit_re=limit.real, limit_im=limit.imag, error=abs(ratio - limit),
                       bound_lhs=bound and bound.lhs, bound_rhs=bound and bound.rhs,
                       bound_ok=bound and bound.holds)
    report.meta.update(x=x, regime="varying" if regime.varying else "fixed")
    return report, status


def cmd_density(cfg: ExperimentConfig) -> tuple[Report, int]:
    regime = cfg.regime()
    if not regime.varying:
        raise UsageError("density tabulates v, which needs an N-scaled last parameter (--scaled-last)")
    law = limits.limit_law(regime)
    lo = min(s[0] for s in law.support)
    hi = max(s[1] for s in law.support)
    margin = 0.05 * (hi - lo)
    count = max(2, cfg.points)
    report = Report(["y", "v", "density", "cdf"])
    for i in range(count):
        y = lo - margin + (hi - lo + 2 * margin) * i / (count - 1)
        report.add(y=y, v=limits.density_v(y, regime), density=law.density(y), cdf=law.cdf(y))
    total = law.total_v()
    report.add(y="integral_v", v=total, cdf=law.cdf(hi))
    ok = abs(total - 1) <= 1e-8
    report.meta.update(case=regime.case, support=[list(s) for s in law.support],
                       v_support=list(limits.v_support(regime)), integral_v=total)
    return report, EXIT_OK if ok else EXIT_INVARIANT


def _poly_residual(m: MultiIndex, params: ParameterSet, k: int) -> bool:
    """Exact polynomial identity behind the nearest-neighbour recurrence."""
    def poly(idx):
        return core.coefficients(idx, params)

    rec = core.recurrence_coeffs(m, params, k)
    deg = m.size + 1
    res = [Fraction(0)] * (deg + 1)
    base = poly(m)
    for i, c in enumerate(base):
        res[i + 1] += c
        res[i] -= rec.b * c
    for i, c in enumerate(poly(m.plus(k))):
        res[i] -= c
    for j in range(m.r):
        if m[j]:
            for i, c in enumerate(poly(m.minus(j))):
                res[i] -= rec.avec[j] * c
    return all(c == 0 for c in res)


def cmd_verify(cfg: ExperimentConfig) -> tuple[Report, int]:
    corner, params = cfg.index(), cfg.params()
    report = Report(["check", "n", "index", "value", "passed"])
    ok = True
    for m in corner.box():
        label = ";".join(map(str, m))
        for k in range(m.r):
            passed = _poly_residual(m, params, k)
            report.add(check="recurrence_residual", n=label, index=k + 1, value=0 if passed else None,
                       passed=passed)
            ok &= passed
        for j in range(m.r):
            for l in range(m[j]):
                rel = ortho.moment_sum(m, params, j, l).relative
                passed = rel < 1e-8
                report.add(check="orthogonality", n=label, index=f"{j + 1}:{l}", value=rel,
                           passed=passed)
                ok &= passed
            if m[j]:
                ratio = ortho.normalization_sum(m, params, j).ratio
                target = float(m[j] * params.a[j])
                passed = abs(ratio - target) <= 1e-8 * target
                report.add(check="normalization", n=label, index=j + 1, value=ratio, passed=passed)
                ok &= passed
        for k in range(m.r):
            passed = zeros.interlacing_check(m, params, k)
            report.add(check="interlacing", n=label, index=k + 1, passed=passed)
            ok &= passed
    report.meta.update(all_passed=ok)
    return report, EXIT_OK if ok else EXIT_INVARIANT


COMMANDS = {
    "eval": cmd_eval,
    "zeros": cmd_zeros,
    "zerodist": cmd_zerodist,
    "ratio": cmd_ratio,
    "density": cmd_density,
    "verify": cmd_verify,
}


_HELP = {
    "eval": "evaluate C_n(x) with every evaluator and compare",
    "zeros": "certified zeros of C_n at scaling N",
    "zerodist": "zero histograms and KS distance to the limit law along a sweep",
    "ratio": "ratio asymptotics and the finite-n bound along a sweep",
    "density": "tabulate v and the mixture CDF (needs --scaled-last)",
    "verify": "recurrence, orthogonality, normalization and interlacing checks",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", help="multi-index, comma separated")
    common.add_argument("--a", help="Poisson parameters, comma separated (fractions allowed)")
    common.add_argument("--q", help="regime weights q_j, default uniform")
    common.add_argument("--t", help="limit of n/N")
    common.add_argument("--N", help="scaling N")
    common.add_argument("--x", help="point: 're' or 're,im' (use --x=-1,0 for negatives)")
    common.add_argument("--k", help="direction (1-based); default all")
    common.add_argument("--scaled-last", dest="scaled_last", action="store_true", default=None,
                        help="last parameter is multiplied by N")
    common.add_argument("--sweep", help="sweep sizes m, comma separated")
    common.add_argument("--tol", help="zero enclosure width")
    common.add_argument("--points", help="grid size for density")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--config", help="JSON file with default values for the flags")
    parser = argparse.ArgumentParser(prog="mcharlier", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=_HELP[name])
    return parser


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        report, status = COMMANDS[args.command](cfg)
    except (UsageError, ValidationError, ResourceLimitError, limits.DomainError,
            ortho.ContractError) as exc:
        stderr.write(f"mcharlier {args.command}: error: {exc}\n")
        return EXIT_USAGE
    emit(report, cfg, stdout)
    _notes(report, cfg, stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
