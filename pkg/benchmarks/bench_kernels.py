"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each case runs the same inputs through both backends, checks the results
are identical, and prints the best-of-N time per backend.
"""

import argparse
import time

import numpy as np

from nquasi.core import RetractSpec, retract
from nquasi.fixtures import irreducible4
from nquasi.generate import seven_instance, random_irreducible, random_isotope, random_quasigroup
from nquasi.kernels import available_backends


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def solvers(pred):
    return np.stack([pred.solve(j).values for j in range(pred.arity)]).astype(np.int64)


def cases():
    rng = np.random.default_rng(0)
    big = random_quasigroup(4, 7, rng)
    yield "latin_violation order 4 arity 7", lambda k: k.latin_violation(big.values, 4, 7)
    fx = irreducible4().table
    yield "latin_violation fixture x100", lambda k: [k.latin_violation(fx.values, 4, 4) for _ in range(100)]

    pairs = []
    for _ in range(10):
        a = random_quasigroup(4, 3, rng).to_predicate()
        b = random_isotope(a.table, rng).to_predicate()
        c = random_quasigroup(4, 3, rng).to_predicate()
        pairs += [(a.codewords, solvers(b)), (a.codewords, solvers(c))]
    yield "isotopy order 4 arity 4, 20 pairs", lambda k: [
        None if (r := k.isotopy_search(w, sv, 4)) is None else np.asarray(r).tolist() for w, sv in pairs
    ]

    M = seven_instance(random_irreducible(4, 3, rng), rng).predicate
    base = retract(M, RetractSpec.leading(7, 4))
    family = [(base.codewords, solvers(retract(M, RetractSpec.leading(7, 4, y)))) for y in np.ndindex(4, 4, 4)]
    yield "isotopy retract family, 64 retracts", lambda k: [np.asarray(k.isotopy_search(w, sv, 4)).tolist() for w, sv in family]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = available_backends()
    names = sorted(backends)
    print(f"{'case':40s}" + "".join(f"{n:>12s}" for n in names) + (f"{'speedup':>10s}" if len(names) > 1 else ""))
    for label, run in cases():
        times, results = {}, {}
        for n in names:
            times[n], results[n] = best_of(lambda: run(backends[n]), args.repeat)
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {label}")
        row = f"{label:40s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
