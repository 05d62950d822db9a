"""Frequency hopping sequences and their periodic Hamming correlation.

The engine evaluates the definition directly: for every ordered shift it
counts the positions where ``x(t) == y(t + tau mod n)``. It deliberately does
not go through difference lists, so it can serve as an independent check of
the combinatorial verifiers in :mod:`fhsets.designs`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .exceptions import InvalidInputError

THREADS_ENV = "FHSETS_THREADS"

# comparisons per vectorized chunk of shifts
_CHUNK = 1 << 22


@dataclass(frozen=True)
class Fhs:
    """A length-``n`` sequence over the alphabet ``{0, ..., l-1}``."""

    symbols: tuple[int, ...]
    l: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if self.l < 1:
            raise InvalidInputError(f"alphabet size must be positive, got {self.l}")
        bad = [s for s in self.symbols if not 0 <= s < self.l]
        if bad:
            raise InvalidInputError(f"symbol {bad[0]} outside alphabet of size {self.l}")

    @property
    def n(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class FhsSet:
    """``M`` sequences sharing length ``n`` and alphabet size ``l``.

    ``claimed_lambda`` is the maximum correlation the producer asserts;
    ``provenance`` records how the set was made and is excluded from equality.
    """

    sequences: tuple[Fhs, ...]
    claimed_lambda: int | None = None
    provenance: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        seqs = tuple(self.sequences)
        object.__setattr__(self, "sequences", seqs)
        if not seqs:
            raise InvalidInputError("an FHS set needs at least one sequence")
        n, l = seqs[0].n, seqs[0].l
        for s in seqs[1:]:
            if s.n != n or s.l != l:
                raise InvalidInputError("member sequences disagree on length or alphabet size")
        if self.claimed_lambda is not None and self.claimed_lambda < 0:
            raise InvalidInputError("claimed lambda must be nonnegative")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], l: int, claimed_lambda: int | None = None,
                  provenance: dict[str, Any] | None = None) -> "FhsSet":
        return cls(tuple(Fhs(tuple(r), l) for r in rows), claimed_lambda, dict(provenance or {}))

    @classmethod
    def from_labels(cls, rows: Iterable[Sequence[Hashable]], alphabet: Iterable[Hashable] | None = None,
                    claimed_lambda: int | None = None,
                    provenance: dict[str, Any] | None = None) -> "FhsSet":
        """Build a set from arbitrary frequency labels.

        Labels are renumbered ``0..l-1`` in sorted order; the label list is
        stored under ``provenance["labels"]``. Pass ``alphabet`` when some
        frequencies never occur but still count towards ``l``.
        """
        rows = [list(r) for r in rows]
        labels = set(alphabet) if alphabet is not None else set()
        for r in rows:
            labels.update(r)
        ordered = sorted(labels)
        index = {lab: i for i, lab in enumerate(ordered)}
        prov = dict(provenance or {})
        prov["labels"] = [list(lab) if isinstance(lab, tuple) else lab for lab in ordered]
        return cls.from_rows(([index[x] for x in r] for r in rows), len(ordered), claimed_lambda, prov)

    @property
    def n(self) -> int:
        return self.sequences[0].n

    @property
    def M(self) -> int:
        return len(self.sequences)

    @property
    def l(self) -> int:
        return self.sequences[0].l

    @property
    def parameters(self) -> tuple[int, int, int | None, int]:
        """``(n, M, lambda, l)`` with the claimed lambda."""
        return self.n, self.M, self.claimed_lambda, self.l

    def rows(self) -> list[list[int]]:
        return [list(s.symbols) for s in self.sequences]

    def as_array(self) -> np.ndarray:
        return np.array(self.rows(), dtype=np.int64).reshape(self.M, self.n)

    def with_claim(self, claimed_lambda: int | None) -> "FhsSet":
        return FhsSet(self.sequences, claimed_lambda, dict(self.provenance))


def hamming_correlation(x: Fhs, y: Fhs, tau: int) -> int:
    """Number of ``t`` with ``x(t) == y(t + tau mod n)``."""
    _check_compatible(x, y)
    n = x.n
    if not 0 <= tau < n:
        raise InvalidInputError(f"shift {tau} outside [0, {n})")
    ys = y.symbols
    return sum(1 for t, a in enumerate(x.symbols) if a == ys[(t + tau) % n])


def _check_compatible(x: Fhs, y: Fhs) -> None:
    if x.n != y.n or x.l != y.l:
        raise InvalidInputError(f"sequences differ: (n={x.n}, l={x.l}) vs (n={y.n}, l={y.l})")


def correlation_table(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``H_{x,y}(tau)`` for every ``tau`` in ``range(n)``, as an int64 array."""
    n = len(x)
    doubled = np.concatenate([y, y[:-1]]) if n > 1 else y
    windows = sliding_window_view(doubled, n)
    out = np.empty(n, dtype=np.int64)
    step = max(1, _CHUNK // max(n, 1))
    for start in range(0, n, step):
        stop = min(n, start + step)
        out[start:stop] = np.count_nonzero(windows[start:stop] == x, axis=1)
    return out


def max_auto(x: Fhs) -> int:
    """``H(X)``: the largest out-of-phase autocorrelation."""
    if x.n < 2:
        raise InvalidInputError("autocorrelation maximum needs n >= 2")
    arr = np.asarray(x.symbols, dtype=np.int64)
    return int(correlation_table(arr, arr)[1:].max())


@dataclass(frozen=True)
class PairCorrelation:
    """Maximum correlation of sequences ``i <= j`` and the first shift reaching it.

    For ``i == j`` the in-phase shift is excluded.
    """

    i: int
    j: int
    maximum: int
    tau: int
    table: tuple[int, ...] | None = None


@dataclass(frozen=True)
class CorrelationProfile:
    """Correlation maxima of every unordered pair (including each sequence with itself).

    Pairs are listed in lexicographic ``(i, j)`` order with ``i <= j``; the
    ordered pair ``(j, i)`` has the same maximum since
    ``H_{Y,X}(tau) = H_{X,Y}(n - tau)``.
    """

    n: int
    M: int
    pairs: tuple[PairCorrelation, ...]

    @property
    def value(self) -> int:
        """``H(S)``."""
        return max(p.maximum for p in self.pairs)

    @property
    def witness(self) -> tuple[int, int, int]:
        """``(i, j, tau)`` of the first pair, then first shift, achieving ``H(S)``."""
        best = self.value
        p = next(p for p in self.pairs if p.maximum == best)
        return p.i, p.j, p.tau

    def pair(self, i: int, j: int) -> PairCorrelation:
        i, j = min(i, j), max(i, j)
        return self.pairs[_pair_index(self.M, i, j)]

    def auto(self, i: int) -> int:
        return self.pair(i, i).maximum

    def cross(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidInputError("cross-correlation needs two distinct sequences")
        return self.pair(i, j).maximum

    def table(self, i: int, j: int) -> tuple[int, ...]:
        """Full ``H_{X_i,X_j}(tau)`` table; only present when requested."""
        p = self.pair(i, j)
        if p.table is None:
            raise InvalidInputError("profile was computed without full tables")
        if i <= j:
            return p.table
        n = self.n
        return tuple(p.table[(n - tau) % n] for tau in range(n))


def _pair_index(M: int, i: int, j: int) -> int:
    return i * M - i * (i - 1) // 2 + (j - i)


def _pair_job(arr: np.ndarray, i: int, j: int, full: bool) -> PairCorrelation:
    tab = correlation_table(arr[i], arr[j])
    scan = tab[1:] if i == j else tab
    k = int(np.argmax(scan))
    tau = k + 1 if i == j else k
    return PairCorrelation(i, j, int(scan[k]), tau, tuple(int(v) for v in tab) if full else None)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def set_correlation(s: FhsSet, full: bool = False) -> CorrelationProfile:
    """Exhaustively measure every auto- and cross-correlation of ``s``.

    Parameters
    ----------
    s : FhsSet
    full : bool
        Keep the complete per-shift table of every pair. Memory grows as
        ``n * M**2``, so it is off by default.
    """
    if s.n < 2:
        raise InvalidInputError("correlation profile needs n >= 2")
    arr = s.as_array()
    jobs = [(i, j) for i in range(s.M) for j in range(i, s.M)]
    workers = _thread_count()
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(lambda ij: _pair_job(arr, ij[0], ij[1], full), jobs))
    else:
        pairs = [_pair_job(arr, i, j, full) for i, j in jobs]
    return CorrelationProfile(s.n, s.M, tuple(pairs))
