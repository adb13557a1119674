"""Flags of arbitrary type, chambers, opposition, and extension counting.

A flag of type J is stored as a tuple of subspace ids, one per dimension in
ascending order of J.  The canonical enumeration order sorts flags by their
id tuple read from the largest dimension down, which groups chambers sharing
a generator together.

Two flags of the same type are opposite when, for every dimension, the
tangent space of one part misses the corresponding part of the other flag;
this reduces to lookups in the per-dimension opposition matrices of the
space, precomputed from point bitmasks.
"""

from __future__ import annotations

from typing import Dict, Sequence, Tuple

import numpy as np

from .counting import count_chamber_extensions, count_flags
from .spaces import PolarSpace


def flag_type(J: Sequence[int], n: int) -> Tuple[int, ...]:
    Jt = tuple(sorted(set(int(t) for t in J)))
    if not Jt:
        raise ValueError("flag type must be nonempty")
    if Jt[0] < 1 or Jt[-1] > n:
        raise ValueError(f"flag type {Jt} out of range for rank {n}")
    return Jt


class FlagFamily:
    """All flags of one type, in canonical order, with projection indexes."""

    def __init__(self, space: PolarSpace, J: Sequence[int]):
        self.space = space
        self.J = flag_type(J, space.n)
        rev = tuple(reversed(self.J))

        partial = [(i,) for i in range(len(space.subspaces(rev[0])))]
        for k in range(1, len(rev)):
            small, big = rev[k], rev[k - 1]
            cont = space.containment_matrix(small, big)
            inside = [np.nonzero(cont[:, b])[0] for b in range(cont.shape[1])]
            partial = [flag + (int(s),) for flag in partial for s in inside[flag[-1]]]
        self.flags: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(reversed(f)) for f in partial)
        expected = count_flags(self.J, space.params).value
        if len(self.flags) != expected:
            raise AssertionError(
                f"enumerated {len(self.flags)} flags of type {self.J}, "
                f"formula gives {expected}")
        self.index: Dict[Tuple[int, ...], int] = {f: i for i, f in enumerate(self.flags)}
        self.parts = np.array(self.flags, dtype=np.int32).reshape(len(self.flags), len(self.J))
        self._projections: Dict[Tuple[int, ...], Dict] = {}

    def __len__(self) -> int:
        return len(self.flags)

    def dims(self) -> Tuple[int, ...]:
        return self.J

    def part(self, pos: int, dim: int) -> int:
        return int(self.parts[pos, self.J.index(dim)])

    def subflag(self, pos: int, Jsub: Sequence[int]) -> Tuple[int, ...]:
        Js = flag_type(Jsub, self.space.n)
        cols = [self.J.index(d) for d in Js]
        return tuple(int(self.parts[pos, c]) for c in cols)

    def projection_index(self, Jsub: Sequence[int]) -> Dict[Tuple[int, ...], np.ndarray]:
        """Positions of this family's flags grouped by their type-Jsub subflag."""
        Js = flag_type(Jsub, self.space.n)
        if Js not in self._projections:
            groups: Dict[Tuple[int, ...], list] = {}
            cols = [self.J.index(d) for d in Js]
            for i, row in enumerate(self.parts):
                key = tuple(int(row[c]) for c in cols)
                groups.setdefault(key, []).append(i)
            self._projections[Js] = {k: np.array(v, dtype=np.int64)
                                     for k, v in groups.items()}
        return self._projections[Js]

    def opposite(self, p1: int, p2: int) -> bool:
        for j, dim in enumerate(self.J):
            opp = self.space.opposition_matrix(dim)
            if not opp[self.parts[p1, j], self.parts[p2, j]]:
                return False
        return True


def enumerate_flags(space: PolarSpace, J: Sequence[int]) -> FlagFamily:
    """The flags of type J, cached on the space."""
    Jt = flag_type(J, space.n)
    cache = getattr(space, "_flag_families", None)
    if cache is None:
        cache = space._flag_families = {}
    if Jt not in cache:
        cache[Jt] = FlagFamily(space, Jt)
    return cache[Jt]


def flags_opposite(space: PolarSpace, J: Sequence[int],
                   f1: Sequence[int], f2: Sequence[int]) -> bool:
    """Opposition test on flags given as id tuples (ascending dimension)."""
    Jt = flag_type(J, space.n)
    if len(f1) != len(Jt) or len(f2) != len(Jt):
        raise ValueError("flag does not match the type")
    for dim, a, b in zip(Jt, f1, f2):
        if not space.opposition_matrix(dim)[a, b]:
            return False
    return True


def chambers_through(space: PolarSpace, J: Sequence[int],
                     flag: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """All chambers whose type-J subflag equals the given flag."""
    Jt = flag_type(J, space.n)
    chambers = enumerate_flags(space, range(1, space.n + 1))
    groups = chambers.projection_index(Jt)
    positions = groups.get(tuple(int(x) for x in flag), np.array([], dtype=np.int64))
    return tuple(chambers.flags[i] for i in positions)


def verify_chamber_extension_counts(space: PolarSpace, J: Sequence[int]) -> bool:
    """Every flag of type J lies in exactly the predicted number of chambers."""
    Jt = flag_type(J, space.n)
    fam = enumerate_flags(space, Jt)
    chambers = enumerate_flags(space, range(1, space.n + 1))
    groups = chambers.projection_index(Jt)
    expected = count_chamber_extensions(Jt, space.params).value
    for f in fam.flags:
        if len(groups.get(f, ())) != expected:
            return False
    return True
