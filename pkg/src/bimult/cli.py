"""Command-line front end: ``bimult run|bench|list-symbols|list-checks``.

Configuration files are flat ``key = value`` text with dotted keys, for
example::

    op = verify.restriction
    symbol = tent-periodized
    triple = 2, 2, 1
    seed = 42
    trials = 50
    grid.L = 8
    grid.N = 512
    output = report.json

Exit codes: 0 success, 2 configuration error, 3 a check failed, 4 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import catalog, kernels
from .core import ExponentTriple, FiniteSequence, FiniteSequence2D, Grid1D, SampledFunction
from .errors import BimultError, ConfigurationError, DomainError
from .operators import apply_C, apply_D
from .symbols import fejer_square_transform, tent_lambda
from . import transference as tr
from . import verification as ver

EXIT_OK, EXIT_CONFIG, EXIT_CHECK, EXIT_RUNTIME = 0, 2, 3, 4


class ConfigError(Exception):
    """Invalid or incomplete configuration; maps to exit code 2."""


# ---------------------------------------------------------------------------
# configuration


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, ``:`` is accepted for ``=``."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split(sep, 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = value.strip().strip('"').strip("'")
    return out


class Config:
    """Typed access to a parsed configuration; errors name the offending field."""

    def __init__(self, values: dict):
        self.values = dict(values)

    def has(self, key):
        return key in self.values

    def str(self, key, default=None, choices=None):
        if key not in self.values:
            if default is None:
                raise ConfigError(f"missing required field '{key}'")
            return default
        v = self.values[key]
        if choices is not None and v not in choices:
            raise ConfigError(f"field '{key}': {v!r} is not one of {', '.join(choices)}")
        return v

    def _num(self, key, default, conv):
        if key not in self.values:
            if default is None:
                raise ConfigError(f"missing required field '{key}'")
            return default
        try:
            return conv(self.values[key])
        except ValueError as exc:
            raise ConfigError(f"field '{key}': cannot parse {self.values[key]!r}") from exc

    def int(self, key, default=None):
        return self._num(key, default, int)

    def float(self, key, default=None):
        from fractions import Fraction

        return self._num(key, default, lambda s: float(Fraction(s)) if s.lower() != "inf" else math.inf)

    def floats(self, key, default=None):
        if key not in self.values:
            if default is None:
                raise ConfigError(f"missing required field '{key}'")
            return list(default)
        return [float(s) for s in self.values[key].replace("(", "").replace(")", "").split(",") if s.strip()]

    def op(self):
        return self.str("op.name") if self.has("op.name") else self.str("op")

    def grid(self, L=8.0, N=512):
        L = self.float("grid.L", L)
        N = self.int("grid.N", N)
        try:
            grid = Grid1D(L, N)
        except ConfigurationError as exc:
            raise ConfigError(f"field 'grid': {exc}") from exc
        ratio = N / (2 * L)
        if not (float(ratio).is_integer() and ratio >= 1 and (int(ratio) & (int(ratio) - 1)) == 0):
            raise ConfigError(f"field 'grid.N': N={N} must be a power-of-two multiple of 2L={2 * L:g}")
        return grid

    def triple(self, default="2,2,1"):
        text = self.str("triple", default)
        try:
            return ExponentTriple.parse(text)
        except DomainError as exc:
            raise ConfigError(f"field 'triple': {exc}") from exc

    def symbol(self, default=None):
        name = self.values.get("symbol.name", self.values.get("symbol", default))
        if name is None:
            raise ConfigError("missing required field 'symbol'")
        params = {k.split(".", 1)[1]: v for k, v in self.values.items()
                  if k.startswith("symbol.") and k != "symbol.name"}
        try:
            return catalog.make_symbol(name, **{k: float(v) for k, v in params.items()})
        except KeyError as exc:
            raise ConfigError(f"field 'symbol': {exc.args[0]}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field 'symbol' parameters {params}: {exc}") from exc

    def seed(self):
        return self.int("seed", 0)

    def trials(self, default):
        return self.int("trials", default)


# ---------------------------------------------------------------------------
# output


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def render(rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: _jsonable(v) for k, v in r.items()} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    cols = list(rows[0].keys()) if rows else []
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def report_rows(reports) -> list:
    rows = []
    for rep in reports:
        if rep.trial_reports:
            rows.extend(r.to_record() for r in rep.trial_reports)
        else:
            rows.append(rep.to_record())
    return rows


# ---------------------------------------------------------------------------
# operations


def _inputs(cfg, grid):
    kind = cfg.str("inputs", "gaussian", choices=("gaussian", "bump"))
    if kind == "gaussian":
        return ver.gaussian_pair(grid)
    return _bump_pair(grid)


def _bump_pair(grid):
    def bump(x):
        inside = np.abs(x) < 2
        return np.where(inside, np.exp(-1.0 / np.where(inside, 4 - x * x, 1.0)), 0.0)

    f = SampledFunction.from_callable(grid, bump)
    g = SampledFunction.from_callable(grid, lambda x: bump(1.25 * x - 0.3) * np.cos(x))
    return f, g


def _sequence_rows(seq: FiniteSequence, name="l"):
    return [{name: int(i), "re": float(v.real), "im": float(v.imag), "abs": float(abs(v))}
            for i, v in zip(seq.indices, seq.values)]


def _sequence2d_rows(seq: FiniteSequence2D):
    return [{"n": n, "m": m, "re": float(v.real), "im": float(v.imag)}
            for n in seq.indices for m, v in zip(seq.indices, seq.values[n + seq.radius])]


def _symbol_rows(psi, lo, hi, step):
    ax = np.arange(lo, hi + step / 2, step)
    xi, eta = np.meshgrid(ax, ax, indexing="ij")
    vals = psi(xi, eta)
    return [{"xi": float(a), "eta": float(b), "re": float(v.real), "im": float(v.imag)}
            for a, b, v in zip(xi.ravel(), eta.ravel(), vals.ravel())]


def _random_phi(cfg, key="phi.radius", default=2, salt=0):
    rng = ver.trial_rng(cfg.seed(), salt)
    return ver.random_symbol_sequence(rng, cfg.int(key, default))


def op_apply_C(cfg):
    grid = cfg.grid()
    f, g = _inputs(cfg, grid)
    out = apply_C(cfg.symbol(), f, g, method=cfg.str("method", "fast", choices=("fast", "slow")))
    rows = [{"x": float(x), "abs": float(abs(v)), "re": float(v.real), "im": float(v.imag)}
            for x, v in zip(grid.points, out.values)]
    return rows, []


def op_apply_D(cfg):
    psi = cfg.symbol()
    radius = cfg.int("radius", 3)
    rng = ver.trial_rng(cfg.seed(), 0)
    a, b = ver.random_sequence(rng, radius), ver.random_sequence(rng, radius)
    Q = cfg.int("quad_points", 16 * radius)
    try:
        out = apply_D(psi, a, b, Q)
    except (ConfigurationError, DomainError) as exc:
        raise ConfigError(f"field 'quad_points'/'symbol': {exc}") from exc
    return _sequence_rows(out), []


def _extend_rows(cfg, psi):
    lo = cfg.float("eval.lo", -3.0)
    hi = cfg.float("eval.hi", 3.0)
    step = cfg.float("eval.step", 0.25)
    return _symbol_rows(psi, lo, hi, step)


def op_extend_tent(cfg):
    return _extend_rows(cfg, tr.tent_extend(_random_phi(cfg))), []


def op_extend_box(cfg):
    return _extend_rows(cfg, tr.piecewise_constant_extend(_random_phi(cfg))), []


def op_extend_jodeit(cfg):
    profile = cfg.str("profile", "tent", choices=("tent", "fejer2-hat"))
    if profile == "tent":
        # quarter-cell tent keeps the support inside J/2 x J/2
        S_hat = tent_lambda(0.25)
    else:
        S_hat = fejer_square_transform()
    phi = _random_phi(cfg)
    p = cfg.float("p", min(1.0, cfg.triple().p3))
    diag = tr.jodeit_hypothesis(S_hat, p, cfg.int("window", 64))
    rows = _extend_rows(cfg, tr.jodeit_extend(phi, S_hat))
    rec = ver.InequalityReport("jodeit_hypothesis", "decay hypothesis of the general extension",
                               diag.tail_estimate, 1e-3 * diag.power_sum,
                               details={"power_sum": diag.power_sum, "root_sum": diag.root_sum})
    return rows, [rec]


def op_extend_dilate(cfg):
    return _sequence2d_rows(tr.dilate_phi(_random_phi(cfg), cfg.int("k", 2))), []


def op_extend_convolve(cfg):
    a = _random_phi(cfg, "a.radius", 1, salt=1)
    return _sequence2d_rows(tr.convolve_symbol(a, _random_phi(cfg))), []


def op_extend_periodize(cfg):
    try:
        psi = tr.periodize_symbol(cfg.symbol("tent"))
    except DomainError as exc:
        raise ConfigError(f"field 'symbol': {exc}") from exc
    return _extend_rows(cfg, psi), []


def _periodic_symbol(cfg, default="tent-periodized"):
    psi = cfg.symbol(default)
    if not psi.periodic:
        raise ConfigError(f"field 'symbol': {psi.name} is not 1-periodic in both variables")
    return psi


def chk_restriction(cfg):
    return [ver.check_restriction_bound(_periodic_symbol(cfg), cfg.triple(), cfg.trials(200), cfg.seed(),
                                        radius=cfg.int("radius", 4))]


def chk_restriction_identity(cfg):
    return [ver.check_restriction_identity(_periodic_symbol(cfg), cfg.trials(3), cfg.seed(),
                                           radius=cfg.int("radius", 4))]


def chk_chain(cfg):
    return [ver.check_quasi_norm_chain(_periodic_symbol(cfg), cfg.triple(), cfg.trials(100), cfg.seed(),
                                       radius=cfg.int("radius", 4))]


def chk_kernel_series(cfg):
    grid = cfg.grid()
    f, g = _bump_pair(grid)
    return [ver.check_kernel_series(_periodic_symbol(cfg), f, g, cfg.int("radius", 16))]


def chk_dilation(cfg):
    phi = _random_phi(cfg)
    return [ver.check_dilation(phi, cfg.int("k", 2), cfg.triple(), cfg.trials(50), cfg.seed())]


def chk_folding(cfg):
    return [ver.check_folding_contraction(cfg.int("k", 2), cfg.float("p", 1.0), cfg.trials(20), cfg.seed())]


def chk_convolution(cfg):
    a = _random_phi(cfg, "a.radius", 1, salt=1)
    return [ver.check_convolution_bound(a, _random_phi(cfg), cfg.triple(), cfg.trials(100), cfg.seed())]


def chk_tent(cfg):
    return [ver.check_tent_interpolation(_random_phi(cfg))]


def chk_piecewise(cfg):
    return [ver.check_piecewise_assembly(_random_phi(cfg), cfg.int("points", 1000), cfg.seed())]


def chk_skl(cfg):
    return [ver.check_skl_decay(cfg.int("radius", 8), cfg.int("inner", 4))]


def chk_support(cfg):
    grid = cfg.grid()
    f, g = ver.gaussian_pair(grid)
    try:
        return [ver.check_support_lemma(cfg.symbol("box"), f, g)]
    except DomainError as exc:
        raise ConfigError(f"field 'symbol': {exc}") from exc


def chk_sampling(cfg):
    grid = cfg.grid(32.0, 1024)
    R = cfg.float("R", 0.5)
    p = cfg.float("p", 2.0)
    g = ver.dirichlet_kernel(grid, R)
    return [ver.check_sampling_lemma(g, R, p, cfg.float("ceiling", 1.0 + 1e-8))]


def chk_bht(cfg):
    grid = cfg.grid(8.0, 1024)
    f, g = ver.gaussian_pair(grid)
    return [ver.check_bht_crossval(f, g, cfg.float("tol", 1e-2))]


def chk_bht_stability(cfg):
    return [ver.check_bht_stability(cfg.triple())]


def chk_remark(cfg):
    radius = cfg.int("radius", 8)
    alt = FiniteSequence(np.array([(-1.0) ** n for n in range(-radius, radius + 1)]))
    return [ver.check_remark_p1_failure(alt, p2=cfg.float("p2", 2.0))]


def chk_performance(cfg):
    return [ver.check_performance(cfg.symbol("bht"), cfg.int("grid.N", 1024), cfg.float("grid.L", 8.0))]


def chk_estimate(cfg):
    psi = cfg.symbol()
    triple = cfg.triple()
    if psi.periodic and cfg.str("domain", "line", choices=("line", "integers")) == "integers":
        op = ver.SequenceMultiplier(psi, cfg.int("radius", 3))
    else:
        op = ver.LineMultiplier(psi, cfg.grid(16.0, 512), cfg.int("radius", 4))
    est = ver.estimate_norm(op, triple, cfg.trials(8), cfg.seed(), cfg.int("ascent_steps", 16))
    rep = ver.InequalityReport("norm_estimate", "lower bound for the operator norm", est.value, math.inf,
                               seed=est.seed, trials=est.trials, witness_digest=est.witness_digest)
    return [rep]


OPERATIONS = {
    "apply.C": op_apply_C,
    "apply.D": op_apply_D,
    "extend.jodeit": op_extend_jodeit,
    "extend.tent": op_extend_tent,
    "extend.box": op_extend_box,
    "extend.dilate": op_extend_dilate,
    "extend.convolve": op_extend_convolve,
    "extend.periodize": op_extend_periodize,
}

CHECKS = {
    "verify.restriction": (chk_restriction, "per-trial restriction norm bound against a lower-bound estimate"),
    "verify.restriction-identity": (chk_restriction_identity, "C(f_a, g_b) equals D(a, b)(j) on each plateau"),
    "verify.chain": (chk_chain, "power-sum chain sum |D|^p3 <= 2 int |C|^p3"),
    "verify.kernel-series": (chk_kernel_series, "apply_C against the kernel series"),
    "verify.dilation": (chk_dilation, "dilated symbol against folded inputs"),
    "verify.folding": (chk_folding, "folding contracts L^p"),
    "verify.convolution": (chk_convolution, "convolution bound with the l^q norm of a"),
    "verify.tent": (chk_tent, "tent extension interpolates at integers"),
    "verify.piecewise": (chk_piecewise, "four-term assembly equals the piecewise-constant extension"),
    "verify.skl": (chk_skl, "decay of the windowed Fejer pieces"),
    "verify.support": (chk_support, "output spectrum inside [-2, 2]"),
    "verify.sampling": (chk_sampling, "sampling inequality for band-limited inputs"),
    "verify.bht": (chk_bht, "bht frequency side against the time-domain p.v."),
    "verify.bht-stability": (chk_bht_stability, "bht norm ratio across grid refinement"),
    "verify.remark": (chk_remark, "p1 = 1 failure of the piecewise-constant extension"),
    "verify.performance": (chk_performance, "fast apply_C speedup and agreement"),
    "verify.estimate": (chk_estimate, "lower bound for an operator norm"),
}


def execute(cfg: Config):
    """Run the configured operation; returns ``(rows, reports)``."""
    op = cfg.op()
    if op in OPERATIONS:
        return OPERATIONS[op](cfg)
    if op in CHECKS:
        reports = CHECKS[op][0](cfg)
        return report_rows(reports), reports
    raise ConfigError(f"field 'op': unknown operation {op!r}")


def _write(text, cfg):
    path = cfg.values.get("output")
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(path) -> int:
    try:
        cfg = Config(parse_config(Path(path).read_text()))
        fmt = cfg.str("format", "json", choices=("json", "csv"))
        rows, reports = execute(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BimultError, ArithmeticError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _write(render(rows, fmt), cfg)
    if any(not ver.report_passed(r) for r in reports):
        return EXIT_CHECK
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench


def bench_rows(symbols, sizes, L=8.0, repeats=1, backend=None) -> list:
    rows = []
    for name in symbols:
        psi = catalog.make_symbol(name)
        for N in sizes:
            grid = Grid1D(L, N)
            f, g = ver.gaussian_pair(grid)
            apply_C(psi, f, g, backend=backend)
            fast_t, slow_t = math.inf, math.inf
            for _ in range(repeats):
                t0 = time.perf_counter()
                fast = apply_C(psi, f, g, method="fast", backend=backend)
                t1 = time.perf_counter()
                slow = apply_C(psi, f, g, method="slow", backend=backend)
                t2 = time.perf_counter()
                fast_t, slow_t = min(fast_t, t1 - t0), min(slow_t, t2 - t1)
            scale = float(np.abs(slow.values).max()) or 1.0
            rows.append({
                "symbol": name,
                "N": N,
                "backend": backend or kernels.BACKEND,
                "fast_s": fast_t,
                "slow_s": slow_t,
                "speedup": slow_t / max(fast_t, 1e-9),
                "relative_error": float(np.abs(fast.values - slow.values).max()) / scale,
            })
    return rows


def cmd_bench(path) -> int:
    try:
        cfg = Config(parse_config(Path(path).read_text()))
        fmt = cfg.str("format", "json", choices=("json", "csv"))
        names = [s.strip() for s in cfg.str("bench.symbols", "bht,tent,one").split(",") if s.strip()]
        for n in names:
            if n not in catalog.SYMBOLS:
                raise ConfigError(f"field 'bench.symbols': unknown symbol {n!r}")
        sizes = [int(s) for s in cfg.floats("bench.sizes", (256, 512, 1024))]
        L = cfg.float("grid.L", 8.0)
        min_speedup = cfg.float("bench.min_speedup", 4.0)
        repeats = cfg.int("bench.repeats", 1)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = bench_rows(names, sizes, L, repeats)
    except (BimultError, ArithmeticError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _write(render(rows, fmt), cfg)
    top = max(sizes)
    ok = all(r["speedup"] >= min_speedup and r["relative_error"] <= 1e-10 for r in rows if r["N"] == top)
    return EXIT_OK if ok else EXIT_CHECK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bimult", description="Bilinear multipliers: operators, transference maps and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run the operation named in a config file")
    p_run.add_argument("config")
    p_bench = sub.add_parser("bench", help="time the fast and slow apply_C paths")
    p_bench.add_argument("config")
    sub.add_parser("list-symbols", help="list registered symbols")
    sub.add_parser("list-checks", help="list operations and checks")
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "bench":
        return cmd_bench(args.config)
    if args.command == "list-symbols":
        for name in catalog.symbol_names():
            print(f"{name:16s} {catalog.describe(name)}")
        return EXIT_OK
    for name in OPERATIONS:
        print(name)
    for name, (_, desc) in CHECKS.items():
        print(f"{name:28s} {desc}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
