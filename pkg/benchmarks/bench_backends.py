"""Compare the compiled kernel against the pure-Python twin.

Run with:  python benchmarks/bench_backends.py

Both backends are driven through the raw kernel entry points on the same
payloads, so the comparison isolates kernel cost from package overhead.
"""

import math
import time

import numpy as np

from revsurf import _kernel_py
from revsurf._ops import MODE_NEG_D2, MODE_PSI3
from revsurf.expr import compile_ast, parse_expression
from revsurf.profile import Profile

try:
    from revsurf import _kernel_c
except ImportError:
    _kernel_c = None


def best_of(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    tape = compile_ast(parse_expression("sin(s)*(1+0.5*sin(s)^2)"))
    knots = np.linspace(0.0, math.pi, 201)
    values = np.sin(knots)
    values[0] = values[-1] = 0.0
    spline = Profile.from_samples(knots, values)
    breaks, coefs = spline._breaks, spline._coefs

    grid = np.linspace(0.0, math.pi, 4096)
    points = np.linspace(0.1, 3.0, 2000)

    workloads = [
        ("tape_eval x2000", lambda k: [k.tape_eval(tape.code, tape.consts, s) for s in points]),
        ("tape_eval_many 4096 x50", lambda k: [k.tape_eval_many(tape.code, tape.consts, grid)
                                               for _ in range(50)]),
        ("spline_eval_many 4096 x50", lambda k: [k.spline_eval_many(breaks, coefs, grid)
                                                 for _ in range(50)]),
        ("integrate -a'' tol 1e-12 x50", lambda k: [k.integrate_tape(
            tape.code, tape.consts, MODE_NEG_D2, 0.0, math.pi, 1e-12, 10**6) for _ in range(50)]),
        ("integrate psi3 tol 1e-12 x50", lambda k: [k.integrate_tape(
            tape.code, tape.consts, MODE_PSI3, 0.0, math.pi, 1e-12, 10**6) for _ in range(50)]),
    ]

    backends = [("pure", _kernel_py)]
    if _kernel_c is not None:
        backends.append(("compiled", _kernel_c))
    else:
        print("compiled kernel not built; showing pure backend only")

    print(f"{'workload':<32}" + "".join(f"{name:>12}" for name, _ in backends)
          + ("{:>10}".format("speedup") if _kernel_c is not None else ""))
    for label, work in workloads:
        times = [best_of(lambda k=kernel: work(k)) for _, kernel in backends]
        row = f"{label:<32}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
