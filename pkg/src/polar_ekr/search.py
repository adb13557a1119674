"""Exact maximum independent sets of opposition graphs.

The solver runs maximum clique on the complement with greedy-colouring
bounds (compiled kernel when available).  Two shortcuts wrap it:

  * squeeze: when a seed example already matches the ratio bound, the
    answer is proved without any search;
  * on a budget the result degrades to certified bounds, never to a guess.

`structure_check` decides whether a maximum chamber set is the blow-up of a
set of s-spaces: for each dimension it tests whether the parts of the
members, taken with their full extension weight, reconstruct the set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple


from . import kernels
from .counting import ratio_bound
from .ekr import EKRSet, verify_ekr, weights
from .flags import enumerate_flags
from .graphs import OppositionGraph, SimpleGraph
from .spaces import PolarSpace


@dataclass(frozen=True)
class SearchResult:
    alpha_lower: int
    alpha_upper: int
    witness: Tuple[int, ...]
    status: str                 # "proved" | "bounds-only"
    nodes: int
    squeeze: bool
    backend: str

    @property
    def alpha(self) -> int:
        if self.status != "proved":
            raise ValueError("alpha is only exact when the status is proved")
        return self.alpha_lower


def _independent(rows, members) -> bool:
    mask = 0
    for m in members:
        mask |= 1 << m
    return all(rows[m] & mask == 0 for m in members)


def max_independent_set(graph, seeds: Sequence[Sequence[int]] = (),
                        node_limit: int = 0, time_limit: float = 0.0,
                        space_params=None, J=None,
                        impl=None) -> SearchResult:
    """Exact independence number with optional seeds and budget.

    `graph` is an OppositionGraph or SimpleGraph.  Seeds must be independent
    sets (verified; a violating seed is an error).  When the space
    parameters admit the ratio bound it is applied at the root, both for the
    squeeze shortcut and as a certified upper bound on budget exhaustion.
    """
    if isinstance(graph, OppositionGraph):
        rows = graph.bitset_rows()
        n = graph.n
        space_params = space_params or graph.space.params
        J = J or graph.J
    else:
        rows = graph.bitset_rows()
        n = graph.n

    best_seed: Tuple[int, ...] = ()
    for seed in seeds:
        seed = tuple(int(x) for x in seed)
        if not _independent(rows, seed):
            raise ValueError("seed is not an independent set")
        if len(seed) > len(best_seed):
            best_seed = seed

    bound = None
    if space_params is not None and J is not None and space_params.valid_regime:
        bound = ratio_bound(J, space_params).value

    if bound is not None and len(best_seed) == bound:
        return SearchResult(bound, bound, best_seed, "proved", 0, True,
                            kernels.backend_name())

    full = (1 << n) - 1
    comp = [full & ~rows[i] & ~(1 << i) for i in range(n)]
    out = kernels.max_clique(comp, n, initial=best_seed,
                             node_limit=node_limit, time_limit=time_limit,
                             impl=impl)
    lower = out["size"]
    upper = out["upper_bound"] if not out["proved"] else out["size"]
    if bound is not None:
        assert lower <= bound, "independent set exceeds the ratio bound: counting bug"
        upper = min(upper, bound)
    witness = tuple(out["members"])
    assert _independent(rows, witness), "solver returned a dependent set"
    status = "proved" if (out["proved"] or lower == upper) else "bounds-only"
    if status == "proved":
        upper = lower
    return SearchResult(lower, upper, witness, status, out["nodes"], False,
                        kernels.backend_name())


@dataclass(frozen=True)
class StructureReport:
    is_blow_up: bool
    dimensions: Tuple[int, ...]             # every s that reconstructs the set
    base_sets: Tuple[Tuple[int, ...], ...]  # matching base s-space ids

    @property
    def s(self) -> Optional[int]:
        return self.dimensions[0] if self.dimensions else None

    @property
    def base(self) -> Optional[Tuple[int, ...]]:
        return self.base_sets[0] if self.base_sets else None


def structure_check(space: PolarSpace, F: EKRSet) -> StructureReport:
    """Blow-up recognition for a maximum chamber set.

    For each dimension s, the candidate base is the set of s-parts of the
    members; the set is a blow-up at s iff every candidate is heavy and the
    total extension weight accounts for every member.
    """
    if F.J != tuple(range(1, space.n + 1)):
        raise ValueError("structure check applies to chamber sets")
    ok, _ = verify_ekr(space, F)
    if not ok:
        raise ValueError("not an EKR set")
    chambers = enumerate_flags(space, F.J)
    dims, bases = [], []
    for s in range(1, space.n + 1):
        rep = weights(space, F, s)
        parts = sorted(set(int(chambers.parts[m, s - 1]) for m in F.members))
        if all(rep.heavy[p] for p in parts) and \
                len(parts) * rep.full_count == len(F.members):
            dims.append(s)
            bases.append(tuple(parts))
    return StructureReport(bool(dims), tuple(dims), tuple(bases))
