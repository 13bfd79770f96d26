"""Locally self-matching strings: alphabet/window formulas, seeded generation
with resampling, and exact verification.

A string w is eps-locally self-matching when every substring s satisfies
nv_lcs(s, s) < eps * |s| (strict). Verification does not enumerate substrings:
a substring violates iff some strictly-increasing chain of equal-symbol pairs
(i, j), i != j, has size >= eps * span, where span is the chain's bounding
interval; the maximal-chain scan below is exact and near-linear in the number
of equal pairs.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .metrics import Symbols, batch_edit_sweep, batch_lcs_sweep, nv_lcs, symbols_of
from .rng import SplitMix64

DEFAULT_RESAMPLE_FACTOR = 1000


class GenerationError(RuntimeError):
    pass


def _check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon <= 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2], got {epsilon}")


def min_alphabet_size(epsilon: float) -> int:
    """Smallest alphabet size the existence bound asks for: ceil((e^2/eps^2)(1+4*eps^(1/4)))."""
    _check_epsilon(epsilon)
    e2 = math.e**2
    return math.ceil((e2 / epsilon**2) * (1 + 4 * epsilon**0.25))


def theta_of(epsilon: float) -> int:
    """Exclusion-window parameter: ceil(e^2 / eps^(7/4)). Always > 3."""
    _check_epsilon(epsilon)
    return math.ceil(math.e**2 / epsilon**1.75)


@dataclass(frozen=True)
class LsmParams:
    epsilon: float
    sigma_size: int
    theta: int
    seed: int

    @classmethod
    def make(cls, epsilon: float, sigma_size: int, seed: int) -> "LsmParams":
        return cls(epsilon, sigma_size, theta_of(epsilon), seed)


@dataclass(frozen=True)
class LsmString:
    params: LsmParams
    value: tuple[int, ...]
    verified: bool
    resample_count: int


@dataclass(frozen=True)
class LsmReport:
    ok: bool
    first_bad_interval: tuple[int, int] | None = None


def _eps_fraction(epsilon) -> Fraction:
    # Fraction(float) is exact, so comparisons against eps*len never suffer
    # rounding at the boundary.
    return Fraction(epsilon)


def _equal_pairs(w: tuple[int, ...]) -> list[tuple[int, int]]:
    """All ordered pairs (a, b), a != b, w[a] == w[b] (1-based), both orientations."""
    occ: dict[int, list[int]] = defaultdict(list)
    pairs: list[tuple[int, int]] = []
    for j, s in enumerate(w, start=1):
        for i in occ[s]:
            pairs.append((i, j))
            pairs.append((j, i))
        occ[s].append(j)
    pairs.sort()
    return pairs


class _FenwickMax:
    def __init__(self, n: int):
        self.n = n
        self.tree = [None] * (n + 1)

    def update(self, i: int, value) -> None:
        while i <= self.n:
            if self.tree[i] is None or self.tree[i] < value:
                self.tree[i] = value
            i += i & -i

    def query(self, i: int):
        best = None
        while i > 0:
            v = self.tree[i]
            if v is not None and (best is None or v > best):
                best = v
            i -= i & -i
        return best


def _has_violating_chain(w: tuple[int, ...], eps: Fraction) -> bool:
    """True iff some chain C of equal pairs has |C| >= eps * span(C).

    Equivalent to the existence of a bad substring. Integer DP: with
    eps = p/q, maximize G = q*|C| + p*min_start over chains ending at each
    pair and test G >= p*(max_end + 1).
    """
    p, q = eps.numerator, eps.denominator
    pairs = _equal_pairs(w)
    if not pairs:
        return False
    fen = _FenwickMax(len(w))
    idx = 0
    while idx < len(pairs):
        # process one group of equal first coordinate: query all, then insert
        group_end = idx
        first = pairs[idx][0]
        while group_end < len(pairs) and pairs[group_end][0] == first:
            group_end += 1
        computed = []
        for a, b in pairs[idx:group_end]:
            best_prev = fen.query(b - 1)
            g = q + max(p * min(a, b), best_prev if best_prev is not None else -1)
            if g >= p * (max(a, b) + 1):
                return True
            computed.append((b, g))
        for b, g in computed:
            fen.update(b, g)
        idx = group_end
    return False


def _window_max_chain(pairs_in: list[tuple[int, int]], n: int) -> int:
    """Longest strictly-increasing-in-both chain among the given pairs."""
    fen = _FenwickMax(n)
    best = 0
    idx = 0
    pairs_in.sort()
    while idx < len(pairs_in):
        group_end = idx
        first = pairs_in[idx][0]
        while group_end < len(pairs_in) and pairs_in[group_end][0] == first:
            group_end += 1
        computed = []
        for a, b in pairs_in[idx:group_end]:
            prev = fen.query(b - 1)
            length = 1 + (prev if prev is not None else 0)
            best = max(best, length)
            computed.append((b, length))
        for b, length in computed:
            fen.update(b, length)
        idx = group_end
    return best


def _first_bad_window_shortest(w: tuple[int, ...], eps: Fraction) -> tuple[int, int]:
    """Shortest-length-first, leftmost-first bad window; caller guarantees one exists."""
    p, q = eps.numerator, eps.denominator
    n = len(w)
    all_pairs = _equal_pairs(w)
    for length in range(2, n + 1):
        for a in range(1, n - length + 2):
            b = a + length - 1
            window_pairs = [(i, j) for i, j in all_pairs if a <= i <= b and a <= j <= b]
            if not window_pairs:
                continue
            if q * _window_max_chain(window_pairs, n) >= p * length:
                return (a, b)
    raise AssertionError("no bad window found despite failed chain check")


def is_bad_substring(s: Symbols, epsilon: float) -> bool:
    """True iff nv_lcs(s, s) >= epsilon * |s| (the generation process's bad event)."""
    xs = symbols_of(s)
    eps = _eps_fraction(epsilon)
    return eps.denominator * nv_lcs(xs, xs) >= eps.numerator * len(xs)


def verify_lsm(w: Symbols, epsilon: float) -> LsmReport:
    """Check every substring; on failure report the lexicographically first bad interval."""
    xs = symbols_of(w)
    eps = _eps_fraction(epsilon)
    if not _has_violating_chain(xs, eps):
        return LsmReport(ok=True)
    p, q = eps.numerator, eps.denominator
    n = len(xs)
    for a in range(1, n + 1):
        suffix = xs[a - 1 :]
        diag = batch_lcs_sweep(suffix, suffix, banned_offset=[0], record="diagonals")[0]
        for length in range(1, len(suffix) + 1):
            if q * int(diag[length]) >= p * length:
                return LsmReport(ok=False, first_bad_interval=(a, a + length - 1))
    raise AssertionError("chain check flagged a violation but no bad interval found")


def verify_sync_string(w: Symbols, epsilon: float) -> bool:
    """True iff every substring s has nv_edit_distance(s, s) >= (1 - epsilon)|s|.

    Fast path: an eps-locally self-matching string always qualifies, since any
    nowhere-vertical self-alignment pays at least |s| - nv_lcs(s, s). Otherwise
    fall back to the direct per-substring scan.
    """
    xs = symbols_of(w)
    eps = _eps_fraction(epsilon)
    if not _has_violating_chain(xs, eps):
        return True
    p, q = eps.numerator, eps.denominator
    n = len(xs)
    for a in range(1, n + 1):
        suffix = xs[a - 1 :]
        diag = batch_edit_sweep(suffix, suffix, banned_offset=[0], record="diagonals")[0]
        for length in range(1, len(suffix) + 1):
            # nv-edit >= (1 - p/q) * length, exactly
            if q * int(diag[length]) < (q - p) * length:
                return False
    return True


def _draw_avoiding(rng: SplitMix64, sigma: int, avoid: set[int]) -> int:
    if len(avoid) >= sigma:
        raise GenerationError(f"alphabet of size {sigma} exhausted by exclusion window")
    while True:
        v = rng.below(sigma)
        if v not in avoid:
            return v


def generate(
    epsilon: float,
    sigma_size: int,
    n: int,
    seed: int,
    *,
    strict_alphabet: bool = True,
    resample_factor: int = DEFAULT_RESAMPLE_FACTOR,
) -> LsmString:
    """Generate a verified eps-locally self-matching string of length n.

    The random process draws each symbol uniformly from the alphabet minus the
    previous ceil(theta) - 1 symbols (the first ceil(theta) symbols are drawn
    distinct), then resamples bad windows, shortest-leftmost first, until the
    verifier accepts. Deterministic given the seed.

    With ``strict_alphabet`` (default) the alphabet must meet
    :func:`min_alphabet_size`, which guarantees convergence. Passing
    ``strict_alphabet=False`` permits smaller alphabets - the exclusion window
    is truncated to the alphabet size and the guarantees become empirical -
    which is how the desk-scale misaligner embeddings obtain their short,
    small-alphabet strings.
    """
    _check_epsilon(epsilon)
    if n < 0:
        raise ValueError("n must be non-negative")
    theta = theta_of(epsilon)
    if strict_alphabet and sigma_size < min_alphabet_size(epsilon):
        raise ValueError(
            f"alphabet too small: sigma={sigma_size} < "
            f"min_alphabet_size({epsilon}) = {min_alphabet_size(epsilon)}"
        )
    if sigma_size < 2 and n > 1:
        raise ValueError("alphabet of size 1 cannot be locally self-matching beyond length 1")

    params = LsmParams.make(epsilon, sigma_size, seed)
    rng = SplitMix64(seed)
    # Relaxed mode truncates the exclusion window to half the alphabet: a
    # window of sigma - 1 would leave a single legal symbol per draw and force
    # a periodic (maximally self-matching) string.
    window = theta - 1 if strict_alphabet else min(theta - 1, max(1, sigma_size // 2))
    eps = _eps_fraction(epsilon)

    w: list[int] = []
    head = min(theta, sigma_size, n)
    w.extend(rng.sample_distinct(sigma_size, head))
    while len(w) < n:
        avoid = set(w[-window:]) if window > 0 else set()
        w.append(_draw_avoiding(rng, sigma_size, avoid))

    budget = resample_factor * max(n, 1)
    resamples = 0
    while _has_violating_chain(tuple(w), eps):
        if resamples >= budget:
            raise GenerationError(
                f"resample budget exhausted after {resamples} iterations "
                f"(epsilon={epsilon}, sigma={sigma_size}, n={n}, seed={seed}); "
                "the alphabet is likely too small for this epsilon"
            )
        a, b = _first_bad_window_shortest(tuple(w), eps)
        resamples += 1
        # Regenerate [a, b + window] left to right so the exclusion-window
        # invariant survives: avoid both the preceding window and any fixed
        # successors within reach; fall back to predecessors only when a small
        # alphabet leaves no choice.
        end = min(n, b + window)
        for p in range(a, end + 1):
            avoid = set(w[max(0, p - 1 - window) : p - 1])
            fixed_tail = set(w[end : min(n, p + window)])
            if len(avoid | fixed_tail) < sigma_size:
                avoid |= fixed_tail
            w[p - 1] = _draw_avoiding(rng, sigma_size, avoid)

    value = tuple(w)
    assert verify_lsm(value, epsilon).ok
    return LsmString(params=params, value=value, verified=True, resample_count=resamples)


# File format: line 1 "epsilon sigmaSize n seed resampleCount",
# line 2 space-separated symbol indices.


def dumps_lsm(s: LsmString) -> str:
    header = (
        f"{s.params.epsilon!r} {s.params.sigma_size} {len(s.value)} "
        f"{s.params.seed} {s.resample_count}"
    )
    return header + "\n" + " ".join(str(v) for v in s.value) + "\n"


def loads_lsm(text: str) -> LsmString:
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty LSM file")
    fields = lines[0].split()
    if len(fields) != 5:
        raise ValueError(f"LSM header must have 5 fields, got {len(fields)}")
    epsilon = float(fields[0])
    sigma_size, n, seed, resample_count = (int(f) for f in fields[1:])
    value = tuple(int(t) for t in lines[1].split()) if len(lines) > 1 else ()
    if len(value) != n:
        raise ValueError(f"LSM body has {len(value)} symbols, header says {n}")
    params = LsmParams.make(epsilon, sigma_size, seed)
    verified = verify_lsm(value, epsilon).ok
    return LsmString(params=params, value=value, verified=verified, resample_count=resample_count)
