"""Command-line sweeps writing CSV, with optional SVG plots.

Commands and CSV headers::

    bayes-curve  n,eta_tilde,pe_exact,pe_thm1_as_stated,pe_consistent
    np-case1     n,eps,miss_exact,miss_kappa0_over_sqrt_n
    np-case2     n,eps,log_eta,neg_ln_pf,lower_rate_n,upper_rate_n
    kl-curve     n,d_exact,half_ln_n,ratio
    corr         example,n,p_false_alarm,p_miss,p_false_alarm_mc,p_miss_mc
    validate     JSON report (stdout or --out)

Exit codes: 0 success, 1 validation failure, 2 usage or domain error.
Floats are written with ``repr`` so every value round-trips exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import asymptotics as asy
from . import correlated as corr
from .divergence import kl_gaussian_to_cauchy
from .exact import Priors, bayes_error, false_alarm, miss
from .lrt import DetectorConfig
from .sampling import RngSpec

__all__ = ["SweepSpec", "HEADERS", "main", "build_parser"]

HEADERS = {
    "bayes-curve": ["n", "eta_tilde", "pe_exact", "pe_thm1_as_stated", "pe_consistent"],
    "np-case1": ["n", "eps", "miss_exact", "miss_kappa0_over_sqrt_n"],
    "np-case2": ["n", "eps", "log_eta", "neg_ln_pf", "lower_rate_n", "upper_rate_n"],
    "kl-curve": ["n", "d_exact", "half_ln_n", "ratio"],
    "corr": ["example", "n", "p_false_alarm", "p_miss", "p_false_alarm_mc", "p_miss_mc"],
}

_DEFAULTS = {
    "bayes-curve": dict(n_min=11, n_max=340, eps=None, priors="0.5,1,1.5"),
    "np-case1": dict(n_min=11, n_max=340, eps="0.01,0.05,0.09", priors=None),
    "np-case2": dict(n_min=50, n_max=340, eps="0.07,0.14", priors=None),
    "kl-curve": dict(n_min=2, n_max=1000, eps=None, priors=None),
    "corr": dict(n_min=3, n_max=100, eps=None, priors=None),
}


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    n_min: int
    n_max: int
    n_step: int
    xi: float
    priors: tuple[float, ...] = ()
    eps: tuple[float, ...] = ()

    def __post_init__(self):
        if not (1 <= self.n_min <= self.n_max):
            raise UsageError(f"need 1 <= n_min <= n_max, got {self.n_min}, {self.n_max}")
        if self.n_step < 1:
            raise UsageError("n_step must be >= 1")
        if not (self.xi > 0 and math.isfinite(self.xi)):
            raise UsageError("xi must be a positive finite number")
        if any(not (p > 0 and math.isfinite(p)) for p in self.priors):
            raise UsageError("eta_tilde values must be positive")
        if any(not (0 < e < 1) for e in self.eps):
            raise UsageError("eps values must lie in (0, 1)")

    @property
    def ns(self) -> range:
        return range(self.n_min, self.n_max + 1, self.n_step)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _float_list(text: str | None) -> tuple[float, ...]:
    if not text:
        return ()
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def rows_bayes_curve(spec: SweepSpec) -> Iterable[list]:
    if not spec.priors:
        raise UsageError("--priors must list at least one eta_tilde")
    for n in spec.ns:
        for et in spec.priors:
            pri = Priors.from_eta_tilde(et)
            _, pe = bayes_error(pri, n, spec.xi)
            try:
                stated = asy.thm1_as_stated(pri, n, spec.xi).pe_asymp
            except ValueError:
                stated = math.nan
            try:
                cons = asy.bayes_asymptotic_consistent(pri, n, spec.xi).pe_asymp
            except ValueError:
                cons = math.nan
            yield [n, et, pe, stated, cons]


def rows_np_case1(spec: SweepSpec) -> Iterable[list]:
    for n in spec.ns:
        for eps in spec.eps:
            le = asy.calibrate_threshold_for_pf(eps, n, spec.xi)
            yield [n, eps, miss(DetectorConfig(n, spec.xi, le)), asy.case1_miss_approx(eps, n, spec.xi)]


def rows_np_case2(spec: SweepSpec) -> Iterable[list]:
    bounds = {}
    for eps in spec.eps:
        bounds[eps] = asy.case2_exponent_bounds(asy.estimate_case2_kappa(eps, spec.n_max, spec.xi), spec.n_max)
    for n in spec.ns:
        for eps in spec.eps:
            le = asy.calibrate_threshold_for_miss(eps, n, spec.xi)
            pf = false_alarm(DetectorConfig(n, spec.xi, le))
            b = bounds[eps]
            yield [n, eps, le, -math.log(pf), b.lower_rate * n, b.upper_rate * n]


def rows_kl_curve(spec: SweepSpec) -> Iterable[list]:
    for n in spec.ns:
        if n < 2:
            continue
        rep = kl_gaussian_to_cauchy(n, spec.xi)
        yield [n, rep.d_exact, rep.d_asymp, rep.d_exact / rep.d_asymp]


def rows_corr(spec: SweepSpec, example: int, alpha: float, trials: int, seed: int) -> Iterable[list]:
    lo = {1: 2, 2: 3, 3: 3}[example]
    for n in spec.ns:
        if n < lo:
            continue
        if example == 1:
            ex = corr.ex1_closed_form(n, alpha)
        elif example == 2:
            ex = corr.ex2_errors(n)
        else:
            ex = corr.ex3_errors(n)
        pf_mc = miss_mc = math.nan
        if trials > 0:
            rng = RngSpec(seed, n)
            if example == 1:
                est = corr.ex1_simulate(n, alpha, trials, rng)
            elif example == 2:
                est = corr.ex2_simulate(n, trials, rng)
            else:
                est = corr.ex3_simulate(n, trials, rng)
            pf_mc, miss_mc = est.p_false_alarm_hat, est.p_miss_hat
        yield [example, n, ex.p_false_alarm, ex.p_miss, pf_mc, miss_mc]


def _write_csv(header: Sequence[str], rows: Iterable[list], out) -> list[list]:
    kept = []
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        kept.append(row)
        w.writerow([_fmt(v) for v in row])
    return kept


def _render_svg(command: str, header: Sequence[str], rows: list[list], path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "isocauchy"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    if command == "kl-curve":
        xs = [r[0] for r in rows]
        ax.plot(xs, [r[1] for r in rows], label="d_exact")
        ax.plot(xs, [r[2] for r in rows], "--", label="half_ln_n")
    else:
        # one line per parameter value and numeric column
        key_col = 0 if command == "corr" else 1
        x_col = 1 if command == "corr" else 0
        groups: dict = {}
        for r in rows:
            groups.setdefault(r[key_col], []).append(r)
        for key, rs in sorted(groups.items()):
            xs = [r[x_col] for r in rs]
            for j in range(2, len(header)):
                if command == "np-case2" and j == 2:
                    continue
                ys = [r[j] for r in rs]
                if all(isinstance(y, float) and math.isnan(y) for y in ys):
                    continue
                ax.plot(xs, ys, label=f"{header[j]} ({header[key_col]}={key})")
        if command in ("bayes-curve", "np-case1", "corr"):
            ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--xi", type=float, default=math.sqrt(2.0), help="scale ratio sqrt(2) sigma / gamma")
    p.add_argument("--n-min", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--svg", default=None, help="also write an SVG plot to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isocauchy", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bayes-curve", help="MAP error: exact vs. both large-n forms")
    _add_sweep_flags(p)
    p.add_argument("--priors", default=None, help="comma-separated eta_tilde = pi_C/pi_G values")

    for name, what in (("np-case1", "false-alarm"), ("np-case2", "miss")):
        p = sub.add_parser(name, help=f"Neyman-Pearson sweep at fixed {what} probability")
        _add_sweep_flags(p)
        p.add_argument("--eps", default=None, help=f"comma-separated {what} targets")

    p = sub.add_parser("kl-curve", help="D(p_G || p_C) against (1/2) ln n")
    _add_sweep_flags(p)

    p = sub.add_parser("corr", help="correlated-hypothesis examples")
    _add_sweep_flags(p)
    p.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--alpha", type=float, default=0.5, help="mixture weight of example 1")
    p.add_argument("--trials", type=int, default=0, help="Monte Carlo trials per n (0 = none)")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("validate", help="run every oracle check and emit a JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200_000, help="Monte Carlo size per check")
    p.add_argument("--out", default="-")
    return parser


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _run_validate(args) -> int:
    from .validation import run_all

    if args.trials < 1 or args.seed < 0:
        raise UsageError("--trials must be >= 1 and --seed >= 0")
    results = run_all(args.seed, args.trials)
    report = {
        "seed": args.seed,
        "trials": args.trials,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
    text = json.dumps(report, indent=2, default=float) + "\n"
    out, close = _open_out(args.out)
    try:
        out.write(text)
    finally:
        if close:
            out.close()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}", file=sys.stderr)
    return 0 if report["passed"] else 1


def _run_sweep(args) -> int:
    d = _DEFAULTS[args.command]
    spec = SweepSpec(
        n_min=args.n_min if args.n_min is not None else d["n_min"],
        n_max=args.n_max if args.n_max is not None else d["n_max"],
        n_step=args.n_step,
        xi=args.xi,
        priors=_float_list(getattr(args, "priors", None) or d["priors"]),
        eps=_float_list(getattr(args, "eps", None) or d["eps"]),
    )
    if args.command == "bayes-curve":
        rows = rows_bayes_curve(spec)
    elif args.command == "np-case1":
        rows = rows_np_case1(spec)
    elif args.command == "np-case2":
        if spec.n_max < 4:
            raise UsageError("np-case2 needs n_max >= 4 to estimate kappa")
        rows = rows_np_case2(spec)
    elif args.command == "kl-curve":
        rows = rows_kl_curve(spec)
    else:
        if not (0 < args.alpha < 1):
            raise UsageError("--alpha must lie in (0, 1)")
        if args.trials < 0 or args.seed < 0:
            raise UsageError("--trials and --seed must be nonnegative")
        rows = rows_corr(spec, args.example, args.alpha, args.trials, args.seed)
    header = HEADERS[args.command]
    # build the whole table first so a domain error leaves no partial file behind
    buf = io.StringIO()
    kept = _write_csv(header, rows, buf)
    out, close = _open_out(args.out)
    try:
        out.write(buf.getvalue())
    finally:
        if close:
            out.close()
    if args.svg:
        _render_svg(args.command, header, kept, args.svg)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        return _run_sweep(args)
    except (UsageError, ValueError, ArithmeticError) as exc:
        print(f"isocauchy {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
