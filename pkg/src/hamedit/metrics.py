"""Exact string-metric kernels: edit/Hamming/LCS distances, their
nowhere-vertical and wildcard variants, alignments and their interval
decomposition, plus a brute-force oracle for small instances.

Symbols are non-negative integers; the reserved sentinel ``WILDCARD`` (-1)
marks wildcard positions. Convenience: every distance function also accepts
plain Python strings, mapping each character to its codepoint and ``*`` or
``â˜…`` to the wildcard sentinel, so ``edit_distance("0101", "1010")`` works.

All functions are pure; the numpy kernels allocate per call and share no
state, so concurrent invocation is safe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

WILDCARD = -1

_WILD_CHARS = {"*", "★"}  # '*' and 'â˜…'


class Alphabet:
    """A finite alphabet; symbols are the indices 0 .. size-1."""

    __slots__ = ("size",)

    def __init__(self, size: int):
        if size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {size}")
        self.size = size

    def __eq__(self, other):
        return isinstance(other, Alphabet) and other.size == self.size

    def __hash__(self):
        return hash(("Alphabet", self.size))

    def __repr__(self):
        return f"Alphabet({self.size})"


BINARY = Alphabet(2)


@dataclass(frozen=True)
class Str:
    """A string of symbol indices over a fixed alphabet."""

    symbols: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self):
        for s in self.symbols:
            if not 0 <= s < self.alphabet.size:
                raise ValueError(f"symbol {s} outside alphabet of size {self.alphabet.size}")

    def __len__(self):
        return len(self.symbols)

    def reverse(self) -> "Str":
        return Str(self.symbols[::-1], self.alphabet)


@dataclass(frozen=True)
class WildStr:
    """A string over an alphabet extended with the wildcard sentinel."""

    symbols: tuple[int, ...]
    alphabet: Alphabet

    def __post_init__(self):
        for s in self.symbols:
            if s != WILDCARD and not 0 <= s < self.alphabet.size:
                raise ValueError(f"symbol {s} outside alphabet of size {self.alphabet.size}")

    def __len__(self):
        return len(self.symbols)

    @property
    def wildcard_count(self) -> int:
        return sum(1 for s in self.symbols if s == WILDCARD)

    def reverse(self) -> "WildStr":
        return WildStr(self.symbols[::-1], self.alphabet)

    def instantiate(self, filling: Sequence[int]) -> tuple[int, ...]:
        """Replace the i-th wildcard with filling[i]."""
        if len(filling) != self.wildcard_count:
            raise ValueError(
                f"need {self.wildcard_count} filler symbols, got {len(filling)}"
            )
        it = iter(filling)
        return tuple(next(it) if s == WILDCARD else s for s in self.symbols)


Symbols = Union[Str, WildStr, Sequence[int], str]


def symbols_of(x: Symbols) -> tuple[int, ...]:
    """Coerce any accepted string form to a tuple of symbol ints."""
    if isinstance(x, (Str, WildStr)):
        return x.symbols
    if isinstance(x, str):
        return tuple(WILDCARD if c in _WILD_CHARS else ord(c) for c in x)
    return tuple(int(s) for s in x)


def wildcard_count(x: Symbols) -> int:
    return sum(1 for s in symbols_of(x) if s == WILDCARD)


# Text serialization: whitespace-separated decimal indices with '*' for the
# wildcard; a binary alphabet additionally admits the compact '01*' form.

def format_symbols(symbols: Sequence[int], compact: bool = False) -> str:
    if compact:
        if any(s not in (0, 1, WILDCARD) for s in symbols):
            raise ValueError("compact form only covers symbols {0, 1, *}")
        return "".join("*" if s == WILDCARD else str(s) for s in symbols)
    return " ".join("*" if s == WILDCARD else str(s) for s in symbols)


def parse_symbols(text: str, compact_ok: bool = False) -> tuple[int, ...]:
    tokens = text.split()
    if compact_ok and len(tokens) == 1 and all(c in "01*★" for c in tokens[0]):
        return tuple(WILDCARD if c in _WILD_CHARS else int(c) for c in tokens[0])
    out = []
    for tok in tokens:
        if tok in _WILD_CHARS:
            out.append(WILDCARD)
        else:
            out.append(int(tok))
    return tuple(out)


# ---------------------------------------------------------------------------
# DP kernels
#
# One batched row-sweep kernel serves every edit-distance variant. Rows are
# vectorized with the classic trick for the in-row insertion chain:
# D[i][j] = j + min_{j' <= j} (t[j'] - j') computed by minimum.accumulate.
# The nowhere-vertical restriction (and the misaligner checkers' shifted
# variant) bans the match/substitute transition into cells with
# j - i == banned_offset; indel transitions through those cells stay legal.
# ---------------------------------------------------------------------------


def _as_batch(xs) -> np.ndarray:
    a = np.asarray(xs, dtype=np.int32)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a


def batch_edit_sweep(
    xs,
    ys,
    *,
    wild: bool = False,
    banned_offset=None,
    record: str = "value",
) -> np.ndarray:
    """Batched edit-distance DP between xs[b] and ys[b] for every b.

    xs: (B, M) and ys: (B, N) integer arrays (1-D inputs are treated as B=1).
    banned_offset: None, or per-batch ints d banning aligned pairs (i, i+d).
    record: 'value' -> (B,) final distances; 'last_row' -> (B, N+1) distances
    from the full xs[b] to every prefix of ys[b]; 'diagonals' -> (B, K+1)
    self-comparison prefix values D[l][l], K = min(M, N).
    """
    xs = _as_batch(xs)
    ys = _as_batch(ys)
    b, m = xs.shape
    _, n = ys.shape
    inf = m + n + 9
    if banned_offset is not None:
        banned_offset = np.asarray(banned_offset, dtype=np.int64).reshape(b)

    col = np.arange(n + 1, dtype=np.int32)
    prev = np.broadcast_to(col, (b, n + 1)).copy()
    k = min(m, n)
    if record == "diagonals":
        diag = np.zeros((b, k + 1), dtype=np.int32)
    for i in range(1, m + 1):
        xcol = xs[:, i - 1 : i]
        eq = ys == xcol
        if wild:
            eq |= (ys == WILDCARD) | (xcol == WILDCARD)
        sub = prev[:, :-1] + (1 - eq.view(np.int8)).astype(np.int32)
        if banned_offset is not None:
            j = i + banned_offset
            mask = (j >= 1) & (j <= n)
            if mask.any():
                rows = np.nonzero(mask)[0]
                sub[rows, j[mask] - 1] = inf
        u = np.empty((b, n + 1), dtype=np.int32)
        u[:, 0] = i
        u[:, 1:] = np.minimum(sub, prev[:, 1:] + 1)
        prev = np.minimum.accumulate(u - col, axis=1) + col
        if record == "diagonals" and i <= k:
            diag[:, i] = prev[:, i]
    if record == "diagonals":
        return diag
    if record == "last_row":
        return prev
    return prev[:, -1]


def batch_lcs_sweep(
    xs,
    ys,
    *,
    wild: bool = False,
    banned_offset=None,
    record: str = "value",
) -> np.ndarray:
    """Batched longest-common-subsequence DP; same conventions as
    :func:`batch_edit_sweep`, with wildcards (when enabled) matching anything."""
    xs = _as_batch(xs)
    ys = _as_batch(ys)
    b, m = xs.shape
    _, n = ys.shape
    if banned_offset is not None:
        banned_offset = np.asarray(banned_offset, dtype=np.int64).reshape(b)

    prev = np.zeros((b, n + 1), dtype=np.int32)
    k = min(m, n)
    if record == "diagonals":
        diag = np.zeros((b, k + 1), dtype=np.int32)
    for i in range(1, m + 1):
        xcol = xs[:, i - 1 : i]
        eq = ys == xcol
        if wild:
            eq |= (ys == WILDCARD) | (xcol == WILDCARD)
        if banned_offset is not None:
            j = i + banned_offset
            mask = (j >= 1) & (j <= n)
            if mask.any():
                rows = np.nonzero(mask)[0]
                eq[rows, j[mask] - 1] = False
        u = np.empty((b, n + 1), dtype=np.int32)
        u[:, 0] = 0
        u[:, 1:] = np.maximum(np.where(eq, prev[:, :-1] + 1, np.int32(0)), prev[:, 1:])
        prev = np.maximum.accumulate(u, axis=1)
        if record == "diagonals" and i <= k:
            diag[:, i] = prev[:, i]
    if record == "diagonals":
        return diag
    if record == "last_row":
        return prev
    return prev[:, -1]


# ---------------------------------------------------------------------------
# Public distance operations
# ---------------------------------------------------------------------------


def hamming_distance(x: Symbols, y: Symbols) -> int:
    """Number of differing positions; requires equal lengths."""
    xs, ys = symbols_of(x), symbols_of(y)
    if len(xs) != len(ys):
        raise ValueError(f"hamming_distance needs equal lengths, got {len(xs)} and {len(ys)}")
    return sum(1 for a, b in zip(xs, ys) if a != b)


def edit_distance(x: Symbols, y: Symbols) -> int:
    """Unit-cost Levenshtein distance."""
    return int(batch_edit_sweep(symbols_of(x), symbols_of(y))[0])


def nv_edit_distance(x: Symbols, y: Symbols) -> int:
    """Cheapest alignment containing no vertical pair (i, i)."""
    return int(batch_edit_sweep(symbols_of(x), symbols_of(y), banned_offset=[0])[0])


def lcs(x: Symbols, y: Symbols) -> int:
    """Length of the longest common subsequence."""
    return int(batch_lcs_sweep(symbols_of(x), symbols_of(y))[0])


def nv_lcs(x: Symbols, y: Symbols) -> int:
    """Longest common subsequence over alignments with no pair (i, i)."""
    return int(batch_lcs_sweep(symbols_of(x), symbols_of(y), banned_offset=[0])[0])


def edit_distance_wild(u: Symbols, v: Symbols) -> int:
    """Minimum edit distance over all instantiations of two wildcard strings.

    A substitution pair touching at least one wildcard costs 0. This is exact
    for the min-over-instantiations semantics: every wildcard position is
    aligned to at most one partner, so one instantiation can realize all
    wildcard matches simultaneously.
    """
    return int(batch_edit_sweep(symbols_of(u), symbols_of(v), wild=True)[0])


def nv_edit_distance_wild(u: Symbols, v: Symbols) -> int:
    """As :func:`edit_distance_wild` under the nowhere-vertical restriction."""
    return int(batch_edit_sweep(symbols_of(u), symbols_of(v), wild=True, banned_offset=[0])[0])


def nv_lcs_wild(u: Symbols, v: Symbols) -> int:
    """Nowhere-vertical LCS with wildcards matching any symbol."""
    return int(batch_lcs_sweep(symbols_of(u), symbols_of(v), wild=True, banned_offset=[0])[0])


# ---------------------------------------------------------------------------
# Alignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Alignment:
    """A monotone partial matching between positions of two strings, 1-based."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last_i, last_j = 0, 0
        for i, j in self.pairs:
            if i <= last_i or j <= last_j:
                raise ValueError(f"alignment pairs must strictly increase, got {self.pairs}")
            last_i, last_j = i, j

    @classmethod
    def identity(cls, n: int) -> "Alignment":
        return cls(tuple((i, i) for i in range(1, n + 1)))

    @classmethod
    def shift(cls, n: int, delta: int) -> "Alignment":
        """The shift alignment pairing i with i + delta wherever both exist."""
        lo = max(1, 1 - delta)
        hi = min(n - delta, n)
        return cls(tuple((i, i + delta) for i in range(lo, hi + 1)))


@dataclass(frozen=True)
class CostBreakdown:
    substitutions: int
    deletions: int
    insertions: int

    @property
    def total(self) -> int:
        return self.substitutions + self.deletions + self.insertions


def alignment_cost(a: Alignment, x: Symbols, y: Symbols) -> CostBreakdown:
    """Exact |S| + |D| + |I| breakdown of an alignment.

    Wildcard inputs use the instantiation-minimizing convention: a pair
    touching a wildcard is a match, not a substitution.
    """
    xs, ys = symbols_of(x), symbols_of(y)
    for i, j in a.pairs:
        if not (1 <= i <= len(xs) and 1 <= j <= len(ys)):
            raise ValueError(f"pair ({i}, {j}) out of range for lengths {len(xs)}, {len(ys)}")
    subs = sum(
        1
        for i, j in a.pairs
        if xs[i - 1] != ys[j - 1] and xs[i - 1] != WILDCARD and ys[j - 1] != WILDCARD
    )
    dels = len(xs) - len(a.pairs)
    ins = len(ys) - len(a.pairs)
    return CostBreakdown(subs, dels, ins)


class IntervalKind(Enum):
    VERTICAL = "vertical"
    NOWHERE_VERTICAL = "nowhere-vertical"


@dataclass(frozen=True)
class IntervalDecomposition:
    """Maximal alternating vertical / nowhere-vertical intervals of [1, n]."""

    intervals: tuple[tuple[int, int, IntervalKind], ...]


def decompose_alignment(a: Alignment, n: int) -> IntervalDecomposition:
    """Partition [1, n] by whether each index is vertically aligned.

    An index i is vertical iff (i, i) is in the alignment; maximal runs of
    equal kind form the intervals, so consecutive intervals alternate.
    """
    if n == 0:
        return IntervalDecomposition(())
    vertical = set()
    for i, j in a.pairs:
        if i == j:
            vertical.add(i)
    out = []
    start = 1
    kind = IntervalKind.VERTICAL if 1 in vertical else IntervalKind.NOWHERE_VERTICAL
    for i in range(2, n + 1):
        k = IntervalKind.VERTICAL if i in vertical else IntervalKind.NOWHERE_VERTICAL
        if k != kind:
            out.append((start, i - 1, kind))
            start, kind = i, k
    out.append((start, n, kind))
    return IntervalDecomposition(tuple(out))


def restrict_alignment(a: Alignment, start: int, end: int) -> Alignment:
    """The alignment induced on interval [start, end], reindexed from 1.

    Valid for intervals of a decomposition of an equal-length alignment: pairs
    never cross a maximal vertical/nowhere-vertical interval boundary.
    """
    pairs = []
    for i, j in a.pairs:
        if start <= i <= end:
            if not start <= j <= end:
                raise ValueError(f"pair ({i}, {j}) crosses interval [{start}, {end}]")
            pairs.append((i - start + 1, j - start + 1))
    return Alignment(tuple(pairs))


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


class OracleKind(Enum):
    EDIT = "edit"
    NV_EDIT = "nv-edit"
    LCS = "lcs"
    NV_LCS = "nv-lcs"
    EDIT_WILD = "edit-wild"
    NV_EDIT_WILD = "nv-edit-wild"
    NV_LCS_WILD = "nv-lcs-wild"


@lru_cache(maxsize=None)
def _matchings(n: int, m: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All monotone matchings between [0, n) and [0, m), cached by shape."""
    out = []
    for k in range(min(n, m) + 1):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                out.append(tuple(zip(rows, cols)))
    return tuple(out)


def oracle_values(xs: Sequence[int], ys: Sequence[int]) -> dict[str, int]:
    """Exhaustive edit / nv-edit / lcs / nv-lcs of two concrete strings.

    Single pass over all monotone matchings; completely independent of the
    DP kernels.
    """
    n, m = len(xs), len(ys)
    best_edit = n + m
    best_nv_edit = n + m
    best_lcs = 0
    best_nv_lcs = 0
    for matching in _matchings(n, m):
        k = len(matching)
        subs = 0
        all_equal = True
        has_vertical = False
        for i, j in matching:
            if i == j:
                has_vertical = True
            if xs[i] != ys[j]:
                subs += 1
                all_equal = False
        cost = subs + (n - k) + (m - k)
        if cost < best_edit:
            best_edit = cost
        if not has_vertical and cost < best_nv_edit:
            best_nv_edit = cost
        if all_equal:
            if k > best_lcs:
                best_lcs = k
            if not has_vertical and k > best_nv_lcs:
                best_nv_lcs = k
    return {
        "edit": best_edit,
        "nv-edit": best_nv_edit,
        "lcs": best_lcs,
        "nv-lcs": best_nv_lcs,
    }


def _instantiations(xs: tuple[int, ...], alphabet: Sequence[int]) -> Iterable[tuple[int, ...]]:
    slots = [i for i, s in enumerate(xs) if s == WILDCARD]
    base = list(xs)
    for fill in itertools.product(alphabet, repeat=len(slots)):
        for pos, sym in zip(slots, fill):
            base[pos] = sym
        yield tuple(base)


def brute_force_oracle(kind: OracleKind | str, x: Symbols, y: Symbols, max_len: int = 8) -> int:
    """Exhaustive-enumeration oracle for every DP operation.

    Wildcard kinds additionally enumerate all instantiations (over the
    concrete symbols present, which suffices for the minimum/maximum) and so
    stay independent of the wildcard-pair DP convention.
    """
    kind = OracleKind(kind)
    xs, ys = symbols_of(x), symbols_of(y)
    if len(xs) > max_len or len(ys) > max_len:
        raise ValueError(f"oracle capped at length {max_len}")
    wild = kind in (OracleKind.EDIT_WILD, OracleKind.NV_EDIT_WILD, OracleKind.NV_LCS_WILD)
    if not wild:
        if WILDCARD in xs or WILDCARD in ys:
            raise ValueError(f"{kind.value} oracle got wildcard input")
        return oracle_values(xs, ys)[kind.value]

    gamma = xs.count(WILDCARD) + ys.count(WILDCARD)
    if gamma > 8:
        raise ValueError(f"wildcard oracle capped at 8 wildcards total, got {gamma}")
    alphabet = sorted({s for s in xs + ys if s != WILDCARD}) or [0]
    plain = {
        OracleKind.EDIT_WILD: "edit",
        OracleKind.NV_EDIT_WILD: "nv-edit",
        OracleKind.NV_LCS_WILD: "nv-lcs",
    }[kind]
    maximize = kind is OracleKind.NV_LCS_WILD
    best = None
    for ix in _instantiations(xs, alphabet):
        for iy in _instantiations(ys, alphabet):
            val = oracle_values(ix, iy)[plain]
            if best is None or (val > best if maximize else val < best):
                best = val
    return best
