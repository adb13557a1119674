#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure Python fallback.

Two workloads, both taken from real instances rather than synthetic input:

  * pairwise opposition matrices for the subspaces of W(5,2) and W(5,3),
  * exact maximum independent set on the line opposition graph of W(5,2)
    (315 vertices, proved optimum 27).

Run:  python benchmarks/bench_kernels.py
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from polar_ekr import _fallback, kernels  # noqa: E402
from polar_ekr.graphs import build_graph  # noqa: E402
from polar_ekr.search import max_independent_set  # noqa: E402
from polar_ekr.spaces import build_polar_space  # noqa: E402

try:
    from polar_ekr import _core
except ImportError:
    _core = None


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_opposition():
    rows = []
    for kind, n, q, r in (("symplectic", 3, 2, 2), ("symplectic", 3, 2, 3),
                          ("symplectic", 3, 3, 2)):
        sp = build_polar_space(kind, n, q)
        perp = sp.perp_masks(r)
        mask = sp.masks(r)
        nbits = sp.ambient_points.shape[0]
        label = f"opposition {kind[0].upper()}(n={n},q={q}) r={r} [{len(mask)}^2]"
        t_py, out_py = timeit(lambda: kernels.opposition_matrix(
            perp, mask, nbits, impl=_fallback))
        if _core is not None:
            t_cy, out_cy = timeit(lambda: kernels.opposition_matrix(
                perp, mask, nbits, impl=_core))
            assert (out_py == out_cy).all()
        else:
            t_cy = None
        rows.append((label, t_py, t_cy))
    return rows


def bench_search():
    sp = build_polar_space("symplectic", 3, 2)
    g = build_graph(sp, [2])
    rows = []
    t_py, r_py = timeit(lambda: max_independent_set(g, impl=_fallback), repeat=1)
    assert r_py.alpha == 27
    label = f"max independent set, lines of W(5,2) [{g.n} vertices]"
    if _core is not None:
        t_cy, r_cy = timeit(lambda: max_independent_set(g, impl=_core), repeat=1)
        assert r_cy.alpha == 27 and r_cy.nodes == r_py.nodes
    else:
        t_cy = None
    rows.append((label, t_py, t_cy))
    return rows


def main():
    print(f"active backend: {kernels.backend_name()}")
    print(f"{'workload':58s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, t_py, t_cy in bench_opposition() + bench_search():
        if t_cy is None:
            print(f"{label:58s} {t_py:9.4f}s {'n/a':>10s}")
        else:
            print(f"{label:58s} {t_py:9.4f}s {t_cy:9.4f}s {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
