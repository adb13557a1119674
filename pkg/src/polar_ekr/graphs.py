"""Opposition graphs: construction, certified spectra, quotient relation,
incidence with chambers, and DIMACS/JSON export.

The graph on flags of type J joins two flags when they are opposite.  It is
regular and vertex-transitive; adjacency is assembled from the per-dimension
opposition matrices of the space by fancy indexing, one conjunction per
dimension in J, optionally split over row blocks across worker threads.

Spectra are exact: floating point only nominates integer candidates, each
candidate's eigenspace is produced and verified in integer arithmetic, and
the multiplicities must sum to the vertex count (see `exactrank`).
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .counting import quotient_scale_factor
from .exactrank import CertifiedSpectrum, certified_spectrum, exact_matmul
from .flags import FlagFamily, enumerate_flags, flag_type
from .spaces import PolarSpace

MAX_DENSE_SPECTRUM = 3000


class OppositionGraph:
    """Opposition graph on the flags of one type."""

    def __init__(self, space: PolarSpace, J: Sequence[int],
                 max_vertices: int = 20000, threads: int = 1):
        self.space = space
        self.J = flag_type(J, space.n)
        self.family: FlagFamily = enumerate_flags(space, self.J)
        n = len(self.family)
        if n > max_vertices:
            raise ValueError(
                f"graph on {n} flags exceeds the configured limit {max_vertices}")
        self.n = n
        self.adjacency = self._build(threads)
        degrees = self.adjacency.sum(axis=1)
        if not (degrees == degrees[0]).all():
            raise AssertionError("opposition graph is not regular")
        self.degree = int(degrees[0])
        self._spectrum: Optional[CertifiedSpectrum] = None
        self._kernels: Dict[int, np.ndarray] = {}
        self._bitrows: Optional[list] = None

    def _build(self, threads: int) -> np.ndarray:
        parts = self.family.parts
        per_dim = [(self.space.opposition_matrix(dim), parts[:, j])
                   for j, dim in enumerate(self.J)]

        def block(lo: int, hi: int) -> np.ndarray:
            opp0, col0 = per_dim[0]
            out = opp0[np.ix_(col0[lo:hi], col0)]
            for opp, col in per_dim[1:]:
                out &= opp[np.ix_(col[lo:hi], col)]
            return out

        if threads <= 1 or self.n < 512:
            return block(0, self.n)
        bounds = np.linspace(0, self.n, threads + 1).astype(int)
        out = np.zeros((self.n, self.n), dtype=bool)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [(lo, hi, pool.submit(block, lo, hi))
                       for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
            for lo, hi, fut in futures:
                out[lo:hi] = fut.result()
        return out

    # -- basic structure -----------------------------------------------------

    def adjacency_int(self) -> np.ndarray:
        return self.adjacency.astype(np.int64)

    def bitset_rows(self) -> list:
        """Neighbour sets as python-int bitmasks (vertex i at bit i)."""
        if self._bitrows is None:
            packed = np.packbits(self.adjacency, axis=1, bitorder="little")
            self._bitrows = [int.from_bytes(row.tobytes(), "little") for row in packed]
        return self._bitrows

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def is_connected(self) -> bool:
        rows = self.bitset_rows()
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            while frontier:
                bit = frontier & -frontier
                frontier ^= bit
                nxt |= rows[bit.bit_length() - 1]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1

    # -- exact spectra ---------------------------------------------------------

    def spectrum(self) -> CertifiedSpectrum:
        if self._spectrum is None:
            if self.n > MAX_DENSE_SPECTRUM:
                raise ValueError(
                    f"refusing dense exact spectrum on {self.n} > "
                    f"{MAX_DENSE_SPECTRUM} vertices")
            self._spectrum, self._kernels = certified_spectrum(self.adjacency_int())
        return self._spectrum

    def eigenspace(self, value: int) -> np.ndarray:
        """Verified integer basis (columns) of the eigenspace."""
        spec = self.spectrum()
        if spec.multiplicity(value) == 0:
            raise ValueError(f"{value} is not an eigenvalue")
        return self._kernels[value]

    def min_eigenvalue(self) -> int:
        return self.spectrum().smallest

    def min_eigenspace(self) -> Tuple[int, np.ndarray]:
        spec = self.spectrum()
        return spec.smallest, self.eigenspace(spec.smallest)

    # -- exports -----------------------------------------------------------------

    def _edges(self, complement: bool = False):
        adj = ~self.adjacency if complement else self.adjacency
        for i in range(self.n):
            row = np.nonzero(adj[i, i + 1:])[0]
            for j in row:
                yield i, i + 1 + int(j)

    def export_dimacs(self, path, complement: bool = False) -> None:
        edges = list(self._edges(complement))
        with open(path, "w") as fh:
            fh.write(f"p edge {self.n} {len(edges)}\n")
            for a, b in edges:
                fh.write(f"e {a + 1} {b + 1}\n")

    def to_json_dict(self, include_edges: bool = True) -> dict:
        sp = self.space
        out = {
            "params": {"kind": sp.kind, "n": sp.n, "q": sp.q, "e": str(sp.e)},
            "J": list(self.J),
            "n_vertices": self.n,
            "degree": self.degree,
        }
        if include_edges:
            out["edges"] = [[a, b] for a, b in self._edges()]
        else:
            out["spectrum"] = [[v, m] for v, m in self.spectrum().eigenvalues]
        return out

    def export_json(self, path, include_edges: bool = True) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(include_edges), fh, sort_keys=True)


def build_graph(space: PolarSpace, J: Sequence[int],
                max_vertices: int = 20000, threads: int = 1) -> OppositionGraph:
    """Opposition graph on flags of type J, cached on the space."""
    Jt = flag_type(J, space.n)
    cache = getattr(space, "_graphs", None)
    if cache is None:
        cache = space._graphs = {}
    if Jt not in cache:
        cache[Jt] = OppositionGraph(space, Jt, max_vertices=max_vertices, threads=threads)
    return cache[Jt]


# -- chamber/flag incidence ------------------------------------------------------


def incidence_matrix(space: PolarSpace, J: Sequence[int]) -> np.ndarray:
    """0/1 matrix, rows chambers, columns flags of type J; entry 1 when the
    chamber contains the flag.  Each row sums to 1."""
    Jt = flag_type(J, space.n)
    chambers = enumerate_flags(space, range(1, space.n + 1))
    fam = enumerate_flags(space, Jt)
    M = np.zeros((len(chambers), len(fam)), dtype=np.int64)
    cols = [chambers.J.index(d) for d in Jt]
    for i, row in enumerate(chambers.parts):
        key = tuple(int(row[c]) for c in cols)
        M[i, fam.index[key]] = 1
    return M


@dataclass(frozen=True)
class QuotientRelationReport:
    J: Tuple[int, ...]
    scale: int
    holds: bool
    lift_orthogonal: Optional[bool]
    lift_eigen: Optional[bool]


def quotient_relation_check(space: PolarSpace, J: Sequence[int],
                            verify_lift: bool = True) -> QuotientRelationReport:
    """Exact check of A_chambers @ M == M @ (q^l * A_J).

    Optionally also verifies on certified eigenvectors v, w of A_J for two
    distinct eigenvalues that M v and M w are orthogonal eigenvectors of the
    chamber adjacency matrix.
    """
    Jt = flag_type(J, space.n)
    g_ch = build_graph(space, range(1, space.n + 1))
    g_J = build_graph(space, Jt)
    M = incidence_matrix(space, Jt)
    scale = quotient_scale_factor(Jt, space.params)
    lhs = exact_matmul(g_ch.adjacency_int(), M)
    rhs = exact_matmul(M, scale * g_J.adjacency_int())
    holds = bool(np.array_equal(lhs, rhs))

    lift_orth = lift_eig = None
    if verify_lift and g_J.n <= MAX_DENSE_SPECTRUM:
        spec = g_J.spectrum()
        lam = spec.smallest
        other = next(v for v, _ in spec.eigenvalues if v != lam)
        v = g_J.eigenspace(lam)[:, :1]
        w = g_J.eigenspace(other)[:, :1]
        Mv = exact_matmul(M, v)
        Mw = exact_matmul(M, w)
        lift_orth = not exact_matmul(Mv.T, Mw).any()
        lift_eig = (np.array_equal(exact_matmul(g_ch.adjacency_int(), Mv), scale * lam * Mv)
                    and np.array_equal(exact_matmul(g_ch.adjacency_int(), Mw),
                                       scale * other * Mw))
    return QuotientRelationReport(Jt, scale, holds, lift_orth, lift_eig)


# -- import side of the JSON/DIMACS formats ---------------------------------------


@dataclass
class SimpleGraph:
    """A plain undirected graph (used for imported instances)."""

    n: int
    edges: Tuple[Tuple[int, int], ...]

    def bitset_rows(self) -> list:
        rows = [0] * self.n
        for a, b in self.edges:
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return rows

    @property
    def degree(self) -> int:
        rows = self.bitset_rows()
        return max(bin(r).count("1") for r in rows) if self.n else 0


def graph_from_json(data: dict) -> SimpleGraph:
    edges = tuple((min(a, b), max(a, b)) for a, b in data["edges"])
    return SimpleGraph(int(data["n_vertices"]), tuple(sorted(set(edges))))


def load_dimacs(path) -> SimpleGraph:
    n = 0
    edges = []
    with open(path) as fh:
        for line in fh:
            tok = line.split()
            if not tok or tok[0] == "c":
                continue
            if tok[0] == "p":
                n = int(tok[2])
            elif tok[0] == "e":
                a, b = int(tok[1]) - 1, int(tok[2]) - 1
                edges.append((min(a, b), max(a, b)))
    return SimpleGraph(n, tuple(sorted(set(edges))))
