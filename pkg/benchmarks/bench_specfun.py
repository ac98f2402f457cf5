"""Compiled vs pure-Python special-function kernels.

Run with ``python3 benchmarks/bench_specfun.py [--repeat N]``. Prints the
median time per call for each kernel and backend, and the speedup.
"""

from __future__ import annotations

import argparse
import statistics
import timeit

from isocauchy.specfun import Branch, available_backends

# argument sets representative of the detector at n ~ 340
CASES = {
    "lambert_w(W0)": ("lambert_w", [(Branch.PRINCIPAL, -0.3), (Branch.PRINCIPAL, -0.3678), (Branch.PRINCIPAL, 2.5)]),
    "lambert_w(W-1)": ("lambert_w", [(Branch.NEGATIVE_ONE, -0.3), (Branch.NEGATIVE_ONE, -1e-5)]),
    "lambert_w_offset": ("lambert_w_offset", [(Branch.PRINCIPAL, 1e-4), (Branch.NEGATIVE_ONE, 0.2)]),
    "reg_gamma_pair": ("reg_gamma_pair", [(170.0, 140.0), (170.0, 210.0), (2.5, 1.0)]),
    "reg_beta_pair": ("reg_beta_pair", [(170.0, 0.5, 0.995), (170.0, 0.5, 0.9999), (10.0, 0.5, 0.5)]),
}


def bench(fn, args_list, number: int, repeat: int) -> float:
    def run():
        for args in args_list:
            fn(*args)

    times = timeit.repeat(run, number=number, repeat=repeat)
    return statistics.median(times) / (number * len(args_list))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=2000)
    args = ap.parse_args()
    backends = available_backends()
    names = sorted(backends)
    print(f"{'kernel':<18}" + "".join(f"{b:>14}" for b in names) + ("   speedup" if len(names) == 2 else ""))
    for label, (attr, arglist) in CASES.items():
        t = {b: bench(getattr(backends[b], attr), arglist, args.number, args.repeat) for b in names}
        row = f"{label:<18}" + "".join(f"{t[b] * 1e6:>11.3f} us" for b in names)
        if "compiled" in t and "pure" in t:
            row += f"   {t['pure'] / t['compiled']:7.1f}x"
        print(row)
    if "compiled" not in backends:
        print("compiled backend not built; only the pure-Python timings are shown")


if __name__ == "__main__":
    main()
