"""Verifiers for candidate embeddings: exhaustive and sampled isometry
checks, interleaved-structure extraction by probing, and the shift-alignment
attack that defeats over-dense interleaved embeddings.

All positions here are 0-based; the alignment objects handed back to callers
use the 1-based convention of :mod:`hamedit.metrics`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .metrics import Alignment, CostBreakdown, alignment_cost, batch_edit_sweep
from .rng import SplitMix64

EmbedFn = Callable[[Sequence[int]], Sequence[int]]

_EXHAUSTIVE_BUDGET = 2**20


@dataclass(frozen=True)
class IsometryViolation:
    x: tuple[int, ...]
    y: tuple[int, ...]
    hamming: int
    edit: int


@dataclass
class IsometryReport:
    ok: bool
    checked_pairs: int
    violations: list[IsometryViolation] = field(default_factory=list)

    @property
    def counterexample(self) -> IsometryViolation | None:
        return self.violations[0] if self.violations else None


def _batched_edit(pairs_x: list[tuple[int, ...]], pairs_y: list[tuple[int, ...]]) -> np.ndarray:
    xs = np.array(pairs_x, dtype=np.int64)
    ys = np.array(pairs_y, dtype=np.int64)
    return batch_edit_sweep(xs, ys)


def verify_isometry_exhaustive(fn: EmbedFn, n: int, alphabet_size: int) -> IsometryReport:
    """Check edit(fn(x), fn(y)) == hamming(x, y) for every pair of inputs.

    Returns on the first violating pair (lexicographic enumeration order).
    The input space is capped at 2^20 points; the pair count is its square.
    """
    if n == 0:
        return IsometryReport(ok=True, checked_pairs=0)
    if alphabet_size**n > _EXHAUSTIVE_BUDGET:
        raise ValueError(
            f"{alphabet_size}^{n} inputs exceed the exhaustive budget {_EXHAUSTIVE_BUDGET}; "
            "use the sampled verifier"
        )
    points = [tuple(p) for p in itertools.product(range(alphabet_size), repeat=n)]
    images = {p: tuple(fn(p)) for p in points}
    checked = 0
    chunk_x: list[tuple[int, ...]] = []
    chunk_y: list[tuple[int, ...]] = []
    chunk_pairs: list[tuple[tuple[int, ...], tuple[int, ...], int]] = []

    def flush() -> IsometryViolation | None:
        nonlocal checked
        if not chunk_pairs:
            return None
        dists = _batched_edit(chunk_x, chunk_y)
        checked += len(chunk_pairs)
        for (x, y, ham), edit in zip(chunk_pairs, dists):
            if int(edit) != ham:
                return IsometryViolation(x, y, ham, int(edit))
        chunk_x.clear()
        chunk_y.clear()
        chunk_pairs.clear()
        return None

    for i, x in enumerate(points):
        for y in points[i:]:
            ham = sum(1 for a, b in zip(x, y) if a != b)
            chunk_x.append(images[x])
            chunk_y.append(images[y])
            chunk_pairs.append((x, y, ham))
            if len(chunk_pairs) >= 4096:
                bad = flush()
                if bad:
                    return IsometryReport(ok=False, checked_pairs=checked, violations=[bad])
    bad = flush()
    if bad:
        return IsometryReport(ok=False, checked_pairs=checked, violations=[bad])
    return IsometryReport(ok=True, checked_pairs=checked)


def verify_isometry_sampled(
    fn: EmbedFn,
    n: int,
    alphabet_size: int,
    trials: int,
    seed: int,
    neighbor_bases: int = 2,
) -> IsometryReport:
    """Sampled isometry check: uniform random pairs plus, for the first
    ``neighbor_bases`` sampled points, all Hamming-distance-1 and -2
    neighbors (where single-position analysis is most fragile)."""
    rng = SplitMix64(seed)
    report = IsometryReport(ok=True, checked_pairs=0)

    def rand_point() -> tuple[int, ...]:
        return tuple(rng.below(alphabet_size) for _ in range(n))

    batch: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def run_batch():
        if not batch:
            return
        xs = [fn(x) for x, _ in batch]
        ys = [fn(y) for _, y in batch]
        dists = _batched_edit(xs, ys)
        report.checked_pairs += len(batch)
        for (x, y), edit in zip(batch, dists):
            ham = sum(1 for a, b in zip(x, y) if a != b)
            if int(edit) != ham:
                report.ok = False
                report.violations.append(IsometryViolation(x, y, ham, int(edit)))
        batch.clear()

    bases: list[tuple[int, ...]] = []
    for _ in range(trials):
        x, y = rand_point(), rand_point()
        if len(bases) < neighbor_bases:
            bases.append(x)
        batch.append((x, y))
        if len(batch) >= 2048:
            run_batch()
    run_batch()

    for base in bases:
        for i in range(n):
            for v in range(alphabet_size):
                if v == base[i]:
                    continue
                y = base[:i] + (v,) + base[i + 1 :]
                batch.append((base, y))
                if len(batch) >= 2048:
                    run_batch()
        for i, j in itertools.combinations(range(n), 2):
            vi = (base[i] + 1 + rng.below(alphabet_size - 1)) % alphabet_size
            vj = (base[j] + 1 + rng.below(alphabet_size - 1)) % alphabet_size
            y = list(base)
            y[i], y[j] = vi, vj
            batch.append((base, tuple(y)))
            if len(batch) >= 2048:
                run_batch()
    run_batch()
    return report


# ---------------------------------------------------------------------------
# Interleaved structure extraction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeWitness:
    """A pair of inputs whose images disagree with interleaved structure;
    replaying them through the embedding reproduces the inconsistency."""

    x: tuple[int, ...]
    y: tuple[int, ...]
    diff_positions: tuple[int, ...]
    reason: str


@dataclass(frozen=True)
class StructureViolation:
    reason: str
    witnesses: tuple[ProbeWitness, ...]


@dataclass
class InterleavedStructure:
    """(eta, pi, frozen) description of an interleaved embedding, 0-based.

    ``pi`` maps each input position's probed symbols to output symbols; for
    same-size alphabets a full bijection, for capped probes a partial
    injection restricted to the probed palette.
    """

    n: int
    output_length: int
    input_alphabet: int
    output_alphabet: int
    eta: tuple[int, ...]
    pi: tuple[dict[int, int], ...]
    frozen_indices: tuple[int, ...]
    frozen: tuple[int, ...]

    @property
    def mutable_rate(self) -> float:
        return self.n / self.output_length

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        """Reconstruct the embedding image from the structure alone."""
        if len(x) != self.n:
            raise ValueError(f"expected length {self.n}, got {len(x)}")
        out: list[int] = [0] * self.output_length
        for idx, val in zip(self.frozen_indices, self.frozen):
            out[idx] = val
        for i, xi in enumerate(x):
            out[self.eta[i]] = self.pi[i][xi]
        return tuple(out)

    def full_pi(self) -> bool:
        return all(len(p) == self.input_alphabet for p in self.pi)


def extract_interleaved_structure(
    fn: EmbedFn,
    n: int,
    alphabet_size: int,
    probe_budget: int = 64,
    seed: int = 0,
    symbol_cap: int | None = None,
) -> InterleavedStructure | StructureViolation:
    """Recover (eta, pi, frozen) by single-position probes from the all-zeros
    base point, then cross-validate input-independence from random bases.

    Every isometric embedding admits such a structure; a probe that changes
    more than one output position, an eta collision, a non-injective pi, or a
    frozen position that varies yields a self-certifying violation witness.
    ``symbol_cap`` limits the symbols probed per position for very large
    alphabets (pi is then partial).
    """
    rng = SplitMix64(seed)
    base = tuple([0] * n)
    image0 = tuple(fn(base))
    big_n = len(image0)

    def symbols_to_probe() -> list[int]:
        if symbol_cap is None or alphabet_size - 1 <= symbol_cap:
            return list(range(1, alphabet_size))
        picks = {1 + rng.below(alphabet_size - 1) for _ in range(symbol_cap * 3)}
        return sorted(picks)[:symbol_cap]

    eta: list[int] = []
    pi: list[dict[int, int]] = []
    for i in range(n):
        spot: int | None = None
        mapping: dict[int, int] = {}
        for v in symbols_to_probe():
            probe = base[:i] + (v,) + base[i + 1 :]
            img = tuple(fn(probe))
            if len(img) != big_n:
                raise ValueError(
                    f"embedding output length changed: {big_n} vs {len(img)}"
                )
            diffs = tuple(j for j in range(big_n) if img[j] != image0[j])
            if len(diffs) != 1:
                return StructureViolation(
                    reason=f"probe at input {i} changed {len(diffs)} output positions",
                    witnesses=(ProbeWitness(base, probe, diffs, "single-flip failure"),),
                )
            if spot is None:
                spot = diffs[0]
            elif spot != diffs[0]:
                return StructureViolation(
                    reason=f"input {i} hits output {spot} and {diffs[0]} depending on the symbol",
                    witnesses=(ProbeWitness(base, probe, diffs, "unstable output index"),),
                )
            mapping[v] = img[diffs[0]]
        if spot is None:  # degenerate single-symbol alphabet
            return StructureViolation(
                reason="alphabet of size 1 admits no probes",
                witnesses=(),
            )
        mapping[0] = image0[spot]
        if len(set(mapping.values())) != len(mapping):
            return StructureViolation(
                reason=f"pi_{i} is not injective on the probed symbols",
                witnesses=(ProbeWitness(base, base, (spot,), "pi collision"),),
            )
        if i and spot in eta:
            other = eta.index(spot)
            return StructureViolation(
                reason=f"eta collision: inputs {other} and {i} both map to output {spot}",
                witnesses=(ProbeWitness(base, base[:i] + (1,) + base[i + 1 :], (spot,), "eta collision"),),
            )
        eta.append(spot)
        pi.append(mapping)

    mutable = set(eta)
    frozen_indices = tuple(j for j in range(big_n) if j not in mutable)
    frozen = tuple(image0[j] for j in frozen_indices)
    structure = InterleavedStructure(
        n=n,
        output_length=big_n,
        input_alphabet=alphabet_size,
        output_alphabet=max(max(image0) + 1, alphabet_size),
        eta=tuple(eta),
        pi=tuple(pi),
        frozen_indices=frozen_indices,
        frozen=frozen,
    )

    # cross-validate eta's input-independence and the frozen set from random bases
    palette = [sorted(p.keys()) for p in structure.pi]
    for _ in range(probe_budget):
        y = tuple(palette[i][rng.below(len(palette[i]))] for i in range(n))
        img_y = tuple(fn(y))
        for idx, val in zip(frozen_indices, frozen):
            if img_y[idx] != val:
                return StructureViolation(
                    reason=f"frozen output position {idx} varies with the input",
                    witnesses=(ProbeWitness(base, y, (idx,), "frozen drift"),),
                )
        i = rng.below(n)
        choices = [v for v in palette[i] if v != y[i]]
        if not choices:
            continue
        v = choices[rng.below(len(choices))]
        y2 = y[:i] + (v,) + y[i + 1 :]
        img_y2 = tuple(fn(y2))
        diffs = tuple(j for j in range(big_n) if img_y[j] != img_y2[j])
        if diffs != (structure.eta[i],) or img_y2[structure.eta[i]] != structure.pi[i][v]:
            return StructureViolation(
                reason=f"input {i} does not behave interleaved from base {y[:8]}...",
                witnesses=(ProbeWitness(y, y2, diffs, "eta depends on the base point"),),
            )
    return structure


def check_reconstruction(
    structure: InterleavedStructure, fn: EmbedFn, probes: int, seed: int
) -> int:
    """Number of fresh random probes (drawn from the probed palette) whose
    images violate the reconstruction identity."""
    rng = SplitMix64(seed)
    palette = [sorted(p.keys()) for p in structure.pi]
    bad = 0
    for _ in range(probes):
        x = tuple(palette[i][rng.below(len(palette[i]))] for i in range(structure.n))
        if tuple(fn(x)) != structure.apply(x):
            bad += 1
    return bad


# ---------------------------------------------------------------------------
# Shift attack
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AttackResult:
    delta: int
    x: tuple[int, ...]
    y: tuple[int, ...]
    image_x: tuple[int, ...]
    image_y: tuple[int, ...]
    alignment: Alignment
    cost: CostBreakdown
    n: int
    violation: bool  # cost.total < n = hamming(x, y)
    costs_by_delta: dict[int, int]


def shift_attack(structure: InterleavedStructure, max_delta: int) -> AttackResult:
    """Sweep the shift alignments A_delta for delta in
    {-(D-1)..-1, 1..D-1} with adversarial input pairs.

    For each shift, mutable output symbols of x are set to match their
    shifted partners (descending order for positive shifts so the partner is
    already fixed, ascending for negative), while y keeps every mutable
    position different from x, making hamming(x, y) = n. The best shift's
    alignment cost below n certifies an isometry violation.
    """
    if max_delta < 2:
        raise ValueError("max_delta must be at least 2")
    if structure.output_alphabet < 2 or structure.input_alphabet < 2:
        raise ValueError("cannot differentiate symbols over an alphabet of size 1")
    if not structure.full_pi():
        raise ValueError("shift attack needs fully probed per-position bijections")

    big_n = structure.output_length
    frozen_at = dict(zip(structure.frozen_indices, structure.frozen))
    inv_pi = [
        {out: inp for inp, out in p.items()} for p in structure.pi
    ]
    eta_inv = {spot: i for i, spot in enumerate(structure.eta)}
    out_symbols = [sorted(p.values()) for p in structure.pi]

    best: AttackResult | None = None
    costs_by_delta: dict[int, int] = {}
    deltas = [d for d in range(-(max_delta - 1), max_delta) if d != 0]
    for delta in deltas:
        image_x = [0] * big_n
        image_y = [0] * big_n
        for j, v in frozen_at.items():
            image_x[j] = v
            image_y[j] = v
        order = sorted(structure.eta, reverse=delta > 0)
        for j in order:
            i = eta_inv[j]
            partner = j + delta
            if 0 <= partner < big_n:
                target = image_y[partner]  # frozen, or mutable already fixed
            else:
                target = out_symbols[i][0]
            if target in inv_pi[i]:
                image_x[j] = target
            else:
                image_x[j] = out_symbols[i][0]  # unreachable symbol: match impossible
            image_y[j] = next(v for v in out_symbols[i] if v != image_x[j])
        x = tuple(inv_pi[i][image_x[structure.eta[i]]] for i in range(structure.n))
        y = tuple(inv_pi[i][image_y[structure.eta[i]]] for i in range(structure.n))
        assert sum(1 for a, b in zip(x, y) if a != b) == structure.n
        align = Alignment.shift(big_n, delta)
        cost = alignment_cost(align, tuple(image_x), tuple(image_y))
        costs_by_delta[delta] = cost.total
        candidate = AttackResult(
            delta=delta,
            x=x,
            y=y,
            image_x=tuple(image_x),
            image_y=tuple(image_y),
            alignment=align,
            cost=cost,
            n=structure.n,
            violation=cost.total < structure.n,
            costs_by_delta={},
        )
        if (
            best is None
            or (cost.total, delta, candidate.image_x, candidate.image_y)
            < (best.cost.total, best.delta, best.image_x, best.image_y)
        ):
            best = candidate
    assert best is not None
    return AttackResult(
        delta=best.delta,
        x=best.x,
        y=best.y,
        image_x=best.image_x,
        image_y=best.image_y,
        alignment=best.alignment,
        cost=best.cost,
        n=best.n,
        violation=best.violation,
        costs_by_delta=costs_by_delta,
    )


def make_synthetic_interleaved(
    n: int,
    pattern: Sequence[bool],
    frozen_value: int = 0,
    alphabet_size: int = 2,
) -> InterleavedStructure:
    """A synthetic interleaved structure: ``pattern`` tiles the output with
    True = mutable slots (identity pi) and False = frozen slots."""
    eta: list[int] = []
    frozen_indices: list[int] = []
    j = 0
    while len(eta) < n:
        if pattern[j % len(pattern)]:
            eta.append(j)
        else:
            frozen_indices.append(j)
        j += 1
    big_n = j
    identity = {v: v for v in range(alphabet_size)}
    return InterleavedStructure(
        n=n,
        output_length=big_n,
        input_alphabet=alphabet_size,
        output_alphabet=alphabet_size,
        eta=tuple(eta),
        pi=tuple(dict(identity) for _ in range(n)),
        frozen_indices=tuple(frozen_indices),
        frozen=tuple(frozen_value for _ in frozen_indices),
    )
