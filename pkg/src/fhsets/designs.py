"""Cyclic difference packings, their relative and nested variants, and difference matrices.

Difference counts are accumulated with :func:`numpy.bincount`, grouping
blocks of equal size so that designs with tens of thousands of blocks stay
cheap to verify.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .correlation import FhsSet
from .exceptions import InvalidInputError

Block = tuple[int, ...]


@dataclass(frozen=True)
class BlockFamily:
    """An ordered list of blocks over ``Z_modulus``.

    Block order is significant: nested designs pair the ``i``-th blocks of
    their families. ``partition`` marks a family that is meant to partition
    ``Z_modulus``; the verifiers check the claim rather than trusting it.
    """

    modulus: int
    blocks: tuple[Block, ...]
    partition: bool = False

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidInputError(f"modulus must be positive, got {self.modulus}")
        blocks = tuple(tuple(sorted(int(x) for x in b)) for b in self.blocks)
        for b in blocks:
            if any(not 0 <= x < self.modulus for x in b):
                raise InvalidInputError(f"block {b} has elements outside Z_{self.modulus}")
            if len(set(b)) != len(b):
                raise InvalidInputError(f"block {b} repeats an element")
        object.__setattr__(self, "blocks", blocks)

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return tuple(sorted({len(b) for b in self.blocks}))

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class Bncdp:
    """``M`` block families over ``Z_modulus`` with a common size and index ``lam``."""

    modulus: int
    families: tuple[BlockFamily, ...]
    lam: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        if not self.families:
            raise InvalidInputError("a nested packing needs at least one family")
        for f in self.families:
            if f.modulus != self.modulus:
                raise InvalidInputError("family modulus differs from design modulus")

    @property
    def M(self) -> int:
        return len(self.families)

    @property
    def size(self) -> int:
        return self.families[0].size

    @property
    def partition(self) -> bool:
        return all(f.partition for f in self.families)


@dataclass(frozen=True)
class Bncrdp:
    """Relative nested packing over ``Z_{mg}`` avoiding the subgroup ``m Z_{mg}``.

    ``m`` generates the forbidden subgroup, whose order is ``g = modulus // m``.
    ``partition`` claims each family partitions ``Z_{mg}`` minus that subgroup.
    """

    modulus: int
    m: int
    families: tuple[BlockFamily, ...]
    lam: int | None = None
    partition: bool = True

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(self.families))
        if self.m < 1 or self.modulus % self.m:
            raise InvalidInputError(f"m={self.m} does not divide the modulus {self.modulus}")
        if not self.families:
            raise InvalidInputError("a nested packing needs at least one family")
        for f in self.families:
            if f.modulus != self.modulus:
                raise InvalidInputError("family modulus differs from design modulus")

    @property
    def g(self) -> int:
        return self.modulus // self.m

    @property
    def M(self) -> int:
        return len(self.families)

    @property
    def size(self) -> int:
        return self.families[0].size

    def subgroup(self) -> list[int]:
        return list(range(0, self.modulus, self.m))


@dataclass(frozen=True)
class Cdm:
    """A ``rows x modulus`` matrix over ``Z_modulus``.

    ``homogeneous`` marks a matrix obtained by dropping the zero row of a
    normalized difference matrix; such a matrix must also have every row a
    permutation of ``Z_modulus``.
    """

    modulus: int
    entries: tuple[tuple[int, ...], ...]
    homogeneous: bool = False

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        if any(len(r) != self.modulus for r in entries):
            raise InvalidInputError(f"every row must have {self.modulus} entries")
        object.__setattr__(self, "entries", entries)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def normalized(self) -> bool:
        return bool(self.entries) and not any(self.entries[0])

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.modulus)


@dataclass(frozen=True)
class Check:
    """Outcome of a verifier.

    ``max_count`` and ``residue`` describe the worst multiplicity seen (the
    offending one when ``ok`` is false); ``where`` names the family
    ``("family", j)`` or ordered pair ``("pair", j, j2)`` it came from.
    """

    ok: bool
    reason: str = ""
    max_count: int = 0
    residue: int | None = None
    where: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ok


# -- multisets -----------------------------------------------------------------

def difference_list(block: Iterable[int], n: int) -> Counter:
    """``{a - b : a != b in block}`` as a residue -> multiplicity map."""
    b = list(block)
    return Counter((x - y) % n for x in b for y in b if x != y)


def external_difference_list(a: Iterable[int], b: Iterable[int], n: int) -> Counter:
    """``{y - x : x in a, y in b}`` as a residue -> multiplicity map; may contain 0."""
    b = list(b)
    return Counter((y - x) % n for x in a for y in b)


def _group_by_size(blocks: Sequence[Block]) -> dict[int, list[Block]]:
    groups: dict[int, list[Block]] = defaultdict(list)
    for b in blocks:
        groups[len(b)].append(b)
    return groups


def internal_counts(blocks: Sequence[Block], n: int) -> np.ndarray:
    """Multiplicity of every residue in the union of the blocks' difference lists."""
    counts = np.zeros(n, dtype=np.int64)
    for k, group in _group_by_size(blocks).items():
        if k < 2:
            continue
        arr = np.array(group, dtype=np.int64)
        ii, jj = np.nonzero(~np.eye(k, dtype=bool))
        counts += np.bincount(((arr[:, ii] - arr[:, jj]) % n).ravel(), minlength=n)
    return counts


def external_counts(first: Sequence[Block], second: Sequence[Block], n: int) -> np.ndarray:
    """Multiplicities in the union of ``Delta_E(first[i], second[i])`` over ``i``."""
    if len(first) != len(second):
        raise InvalidInputError("external differences need families of equal size")
    groups: dict[tuple[int, int], list[tuple[Block, Block]]] = defaultdict(list)
    for a, b in zip(first, second):
        if a and b:
            groups[len(a), len(b)].append((a, b))
    counts = np.zeros(n, dtype=np.int64)
    for pairs in groups.values():
        xa = np.array([p[0] for p in pairs], dtype=np.int64)
        yb = np.array([p[1] for p in pairs], dtype=np.int64)
        counts += np.bincount(((yb[:, None, :] - xa[:, :, None]) % n).ravel(), minlength=n)
    return counts


def _worst(counts: np.ndarray, allowed: np.ndarray) -> tuple[int, int]:
    """(max count, lowest residue attaining it) over the allowed residues."""
    masked = np.where(allowed, counts, -1)
    r = int(np.argmax(masked))
    return int(masked[r]), r


class _Tracker:
    """Keeps the running worst multiplicity across the parts of a design."""

    def __init__(self):
        self.best = Check(True)

    def see(self, count: int, residue: int, where: tuple) -> None:
        if count > self.best.max_count:
            self.best = Check(True, "", count, residue, where)


def _cover_check(blocks: Sequence[Block], target: set[int], where: tuple, what: str) -> Check | None:
    seen: set[int] = set()
    for b in blocks:
        for x in b:
            if x in seen:
                return Check(False, f"{what}: element {x} lies in two blocks", 0, x, where)
            seen.add(x)
    if seen != target:
        missing = sorted(target - seen)
        extra = sorted(seen - target)
        x = missing[0] if missing else extra[0]
        return Check(False, f"{what}: element {x} {'uncovered' if missing else 'not allowed'}", 0, x, where)
    return None


def is_partition(f: BlockFamily) -> bool:
    return _cover_check(f.blocks, set(range(f.modulus)), (), "") is None


# -- verifiers -----------------------------------------------------------------

def verify_cdp(f: BlockFamily, lam: int) -> Check:
    """Every nonzero residue occurs at most ``lam`` times in the family's difference list."""
    if f.partition:
        bad = _cover_check(f.blocks, set(range(f.modulus)), ("family", 0), "not a partition")
        if bad is not None:
            return bad
    n = f.modulus
    nonzero = np.arange(n) != 0
    count, r = _worst(internal_counts(f.blocks, n), nonzero)
    if count > lam:
        return Check(False, f"difference {r} occurs {count} > {lam} times", count, r, ("family", 0))
    return Check(True, "", max(count, 0), r if count > 0 else None, ("family", 0) if count > 0 else ())


def verify_bncdp(d: Bncdp, lam: int | None = None) -> Check:
    """Check the per-family packing condition and every ordered pair's external differences."""
    lam = d.lam if lam is None else lam
    if lam is None:
        raise InvalidInputError("no index given and the design carries none")
    sizes = {f.size for f in d.families}
    if len(sizes) != 1:
        raise InvalidInputError(f"families have different sizes {sorted(sizes)}")
    n = d.modulus
    track = _Tracker()
    nonzero = np.arange(n) != 0
    everything = np.ones(n, dtype=bool)
    for j, f in enumerate(d.families):
        if f.partition:
            bad = _cover_check(f.blocks, set(range(n)), ("family", j), "not a partition")
            if bad is not None:
                return bad
        count, r = _worst(internal_counts(f.blocks, n), nonzero)
        if count > lam:
            return Check(False, f"difference {r} occurs {count} > {lam} times", count, r, ("family", j))
        track.see(count, r, ("family", j))
    for j, j2 in _ordered_pairs(d.M):
        count, r = _worst(external_counts(d.families[j].blocks, d.families[j2].blocks, n), everything)
        if count > lam:
            return Check(False, f"external difference {r} occurs {count} > {lam} times",
                         count, r, ("pair", j, j2))
        track.see(count, r, ("pair", j, j2))
    return track.best


def _ordered_pairs(M: int) -> list[tuple[int, int]]:
    return [(j, j2) for j in range(M) for j2 in range(M) if j != j2]


def bncdp_index(d: Bncdp) -> int:
    """Smallest ``lam`` at which ``d`` verifies (ignoring partition claims)."""
    n = d.modulus
    worst = 0
    for f in d.families:
        worst = max(worst, int(internal_counts(f.blocks, n)[1:].max(initial=0)))
    for j, j2 in _ordered_pairs(d.M):
        worst = max(worst, int(external_counts(d.families[j].blocks, d.families[j2].blocks, n).max()))
    return worst


def verify_bncrdp(d: Bncrdp, lam: int | None = None) -> Check:
    """Like :func:`verify_bncdp`, but no difference may fall in ``m Z_{mg}``."""
    lam = d.lam if lam is None else lam
    if lam is None:
        raise InvalidInputError("no index given and the design carries none")
    sizes = {f.size for f in d.families}
    if len(sizes) != 1:
        raise InvalidInputError(f"families have different sizes {sorted(sizes)}")
    n, m = d.modulus, d.m
    forbidden = np.arange(n) % m == 0
    allowed = ~forbidden
    complement = set(range(n)) - set(d.subgroup())
    track = _Tracker()

    def judge(counts: np.ndarray, where: tuple, kind: str) -> Check | None:
        hit, r = _worst(counts, forbidden)
        if hit > 0:
            return Check(False, f"{kind} {r} lies in the forbidden subgroup", hit, r, where)
        count, r = _worst(counts, allowed)
        if count > lam:
            return Check(False, f"{kind} {r} occurs {count} > {lam} times", count, r, where)
        track.see(count, r, where)
        return None

    for j, f in enumerate(d.families):
        if d.partition:
            bad = _cover_check(f.blocks, complement, ("family", j), "not a partition of the complement")
            if bad is not None:
                return bad
        bad = judge(internal_counts(f.blocks, n), ("family", j), "difference")
        if bad is not None:
            return bad
    for j, j2 in _ordered_pairs(d.M):
        bad = judge(external_counts(d.families[j].blocks, d.families[j2].blocks, n),
                    ("pair", j, j2), "external difference")
        if bad is not None:
            return bad
    return track.best


# -- difference matrices -------------------------------------------------------

def verify_cdm(D: Cdm) -> Check:
    """Every pair of rows differs by a permutation of ``Z_w``.

    A matrix flagged homogeneous must also have each row a permutation.
    """
    w = D.modulus
    arr = D.as_array()
    if arr.size and (arr.min() < 0 or arr.max() >= w):
        return Check(False, f"entry outside Z_{w}")
    full = np.arange(w)
    for r, h in combinations(range(D.rows), 2):
        diff = np.sort((arr[h] - arr[r]) % w)
        if not np.array_equal(diff, full):
            return Check(False, f"rows {r} and {h} do not differ by a permutation", where=("rows", r, h))
    if D.homogeneous:
        for r in range(D.rows):
            if not np.array_equal(np.sort(arr[r]), full):
                return Check(False, f"row {r} is not a permutation", where=("row", r))
    return Check(True)


def normalize_cdm(D: Cdm) -> Cdm:
    """Subtract the first row from every row, column by column."""
    check = verify_cdm(D)
    if not check:
        raise InvalidInputError(f"not a difference matrix: {check.reason}")
    if D.rows == 0:
        raise InvalidInputError("cannot normalize an empty matrix")
    arr = D.as_array()
    return Cdm(D.modulus, tuple(map(tuple, (arr - arr[0]) % D.modulus)))


def homogenize_cdm(D: Cdm) -> Cdm:
    """Drop the zero first row of a normalized difference matrix."""
    check = verify_cdm(D)
    if not check:
        raise InvalidInputError(f"not a difference matrix: {check.reason}")
    if not D.normalized:
        raise InvalidInputError("matrix is not normalized")
    if D.rows < 2:
        raise InvalidInputError("need at least two rows to homogenize")
    return Cdm(D.modulus, D.entries[1:], homogeneous=True)


# -- FHS sets <-> nested packings ---------------------------------------------

def fhs_set_to_bncdp(s: FhsSet) -> Bncdp:
    """Family ``j`` lists, for each frequency ``i``, the positions of ``i`` in sequence ``j``."""
    families = []
    for seq in s.sequences:
        positions: list[list[int]] = [[] for _ in range(s.l)]
        for t, sym in enumerate(seq.symbols):
            positions[sym].append(t)
        families.append(BlockFamily(s.n, tuple(map(tuple, positions)), partition=True))
    return Bncdp(s.n, tuple(families), s.claimed_lambda)


def bncdp_to_fhs_set(d: Bncdp, provenance: dict | None = None) -> FhsSet:
    """Inverse of :func:`fhs_set_to_bncdp`; block ``i`` becomes frequency ``i``."""
    sizes = {f.size for f in d.families}
    if len(sizes) != 1:
        raise InvalidInputError(f"families have different sizes {sorted(sizes)}")
    rows = []
    for j, f in enumerate(d.families):
        if not is_partition(f):
            raise InvalidInputError(f"family {j} does not partition Z_{d.modulus}")
        row = [0] * d.modulus
        for i, b in enumerate(f.blocks):
            for x in b:
                row[x] = i
        rows.append(row)
    return FhsSet.from_rows(rows, d.size, d.lam, provenance)
