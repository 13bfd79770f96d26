"""Statistically filtered misaligner search.

Preprocessing measures the edit-distance distribution between random
wildcard-patterned strings -- every prefix, suffix, and middle portion of one
against the whole of another -- and turns low quantiles of those histograms
into per-length thresholds. A candidate joins the collection only if all its
segment distances against every member (in both directions) clear the
thresholds; full property verification then prunes the survivors until
everything passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .metrics import WILDCARD, batch_edit_sweep
from .misaligner import (
    Misaligner,
    MisalignerParams,
    VerifyReport,
    check_block_and_half,
    check_block_vs_substring,
    check_short_intervals,
    verify,
)
from .rng import SplitMix64


@dataclass(frozen=True)
class SearchConfig:
    params: MisalignerParams  # target shape; alpha is the minimum acceptable
    rank_frac: float = 0.005
    preprocess_count: int = 2000
    candidate_budget: int = 20000
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.rank_frac <= 1:
            raise ValueError(f"rank_frac must lie in (0, 1], got {self.rank_frac}")
        if self.preprocess_count < 1000:
            raise ValueError("preprocess_count must be at least 1000")
        if self.candidate_budget < 1:
            raise ValueError("candidate_budget must be positive")


@dataclass
class StatTables:
    m: int
    t: int
    rank_frac: float
    prefix_stats: dict[int, np.ndarray]
    suffix_stats: dict[int, np.ndarray]
    middle_stats: dict[int, np.ndarray]
    prefix_thr: np.ndarray  # indexed by segment length, entry 0 unused
    suffix_thr: np.ndarray
    middle_thr: np.ndarray


def random_codeword(m: int, t: int, rng: SplitMix64) -> tuple[int, ...]:
    """A random string over {0,1,*} with wildcards exactly at 1 mod t."""
    return tuple(
        WILDCARD if i % t == 1 or t == 1 else rng.below(2) for i in range(1, m + 1)
    )


def _quantile_thresholds(stats: dict[int, np.ndarray], m: int, rank_frac: float) -> np.ndarray:
    """Lower rank_frac-quantile per segment length, forced nonincreasing.

    rank_frac is the tolerated violation rate: a candidate is rejected when a
    measured distance falls strictly below its threshold, which happens for
    about a rank_frac fraction of random pairs. rank_frac = 1 puts thresholds
    at the histogram maxima. Segment-vs-whole distances shrink as the segment
    grows (the length gap dominates short segments), so thresholds decrease
    with length; the right-to-left running max smooths sampling wobble.
    """
    thr = np.zeros(m + 1, dtype=np.int64)
    for length in range(1, m + 1):
        vals = stats.get(length)
        if vals is None or len(vals) == 0:
            thr[length] = 0
            continue
        idx = min(len(vals) - 1, int(math.floor(rank_frac * len(vals))))
        thr[length] = vals[idx]
    thr[1:] = np.maximum.accumulate(thr[1:][::-1])[::-1]
    return thr


def build_stat_tables(
    params: MisalignerParams, preprocess_count: int, rank_frac: float, seed: int
) -> StatTables:
    """Sample random patterned pairs and build per-length distance histograms
    for prefix-vs-whole, suffix-vs-whole, and middle-vs-whole comparisons."""
    if preprocess_count < 1:
        raise ValueError("preprocess_count must be at least 1")
    if not 0 < rank_frac <= 1:
        raise ValueError(f"rank_frac must lie in (0, 1], got {rank_frac}")
    m, t = params.m, params.t
    rng = SplitMix64(seed)
    us = np.array([random_codeword(m, t, rng) for _ in range(preprocess_count)], dtype=np.int64)
    vs = np.array([random_codeword(m, t, rng) for _ in range(preprocess_count)], dtype=np.int64)

    # dist(u[:l], v) for all l at once: rows v, cols u, read the last row
    prefix_rows = batch_edit_sweep(vs, us, wild=True, record="last_row")
    suffix_rows = batch_edit_sweep(vs[:, ::-1], us[:, ::-1], wild=True, record="last_row")
    prefix_stats = {l: np.sort(prefix_rows[:, l]) for l in range(1, m + 1)}
    suffix_stats = {l: np.sort(suffix_rows[:, l]) for l in range(1, m + 1)}

    middle_acc: dict[int, list[np.ndarray]] = {l: [] for l in range(1, m + 1)}
    for start in range(m):
        cols = us[:, start:]
        rows = batch_edit_sweep(vs, cols, wild=True, record="last_row")
        for length in range(1, m - start + 1):
            middle_acc[length].append(rows[:, length])
    middle_stats = {l: np.sort(np.concatenate(v)) for l, v in middle_acc.items() if v}

    return StatTables(
        m=m,
        t=t,
        rank_frac=rank_frac,
        prefix_stats=prefix_stats,
        suffix_stats=suffix_stats,
        middle_stats=middle_stats,
        prefix_thr=_quantile_thresholds(prefix_stats, m, rank_frac),
        suffix_thr=_quantile_thresholds(suffix_stats, m, rank_frac),
        middle_thr=_quantile_thresholds(middle_stats, m, rank_frac),
    )


def requirement_floor(params: MisalignerParams) -> int:
    """ceil(alpha * m): the smallest integer cost meeting the distance bound."""
    f = Fraction(params.alpha) * params.m
    return -(-f.numerator // f.denominator)


def passes_filters(
    stats: StatTables,
    cand: tuple[int, ...],
    others: list[tuple[int, ...]],
    floor: int = 0,
) -> bool:
    """Threshold filters between a candidate and every existing codeword,
    checked with the roles interchanged as well.

    ``floor`` additionally enforces necessary conditions for the target alpha:
    nv self-distance of the candidate, full-length pair distances, and
    window-length middle-vs-whole distances must all reach ceil(alpha*m),
    or the final verification could never succeed.
    """
    m = stats.m
    cand_a = np.array([cand], dtype=np.int64)
    if floor and int(
        batch_edit_sweep(cand_a, cand_a, wild=True, banned_offset=[0])[0]
    ) < floor:
        return False
    if not others:
        return True
    others_a = np.array(others, dtype=np.int64)
    e = len(others)
    cand_rep = np.repeat(cand_a, e, axis=0)
    wlo = m // 2 + 1
    mid_floor = np.zeros(m + 1, dtype=np.int64)
    mid_floor[wlo:] = floor
    mid_thr = np.maximum(stats.middle_thr, mid_floor)

    # full-length distances first: the cheapest and most selective screen
    full = batch_edit_sweep(cand_rep, others_a, wild=True)
    if (full < max(int(stats.prefix_thr[m]), floor)).any():
        return False

    if floor:
        # block-and-a-half necessary conditions between the candidate and each
        # member: nv distance of a block to itself extended by the other block
        # (both roles, both directions of extension via reversal)
        for base, ext in (
            (cand_rep, others_a),
            (others_a, cand_rep),
            (cand_rep[:, ::-1], others_a[:, ::-1]),
            (others_a[:, ::-1], cand_rep[:, ::-1]),
        ):
            lr = batch_edit_sweep(
                base,
                np.concatenate([base, ext], axis=1),
                wild=True,
                banned_offset=[0] * e,
                record="last_row",
            )
            if (lr[:, m:] < floor).any():
                return False

    def segments_ok(seg_of: np.ndarray, whole: np.ndarray) -> bool:
        pref = batch_edit_sweep(whole, seg_of, wild=True, record="last_row")
        if (pref[:, 1 : m + 1] < stats.prefix_thr[1 : m + 1]).any():
            return False
        suf = batch_edit_sweep(whole[:, ::-1], seg_of[:, ::-1], wild=True, record="last_row")
        if (suf[:, 1 : m + 1] < stats.suffix_thr[1 : m + 1]).any():
            return False
        # all middle starts in one padded batch
        xs_rows, ys_rows = [], []
        for start in range(1, m):
            xs_rows.append(whole)
            ys_rows.append(
                np.pad(seg_of[:, start:], ((0, 0), (0, start)), constant_values=-6)
            )
        xs = np.concatenate(xs_rows, axis=0)
        ys = np.concatenate(ys_rows, axis=0)
        mid = batch_edit_sweep(xs, ys, wild=True, record="last_row")
        for si, start in enumerate(range(1, m)):
            width = m - start
            block = mid[si * e : (si + 1) * e, 1 : width + 1]
            if (block < mid_thr[1 : width + 1]).any():
                return False
        return True

    # segments of the candidate vs each member, then the roles interchanged
    return segments_ok(cand_rep, others_a) and segments_ok(others_a, cand_rep)


@dataclass
class SearchResult:
    misaligner: Misaligner
    verified: bool
    achieved_alpha: Fraction | None
    candidates_used: int
    requested: MisalignerParams
    report: VerifyReport | None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.verified and self.misaligner.params.k >= self.requested.k


def _safe_float_alpha(a: Fraction) -> float:
    """float(a) rounded toward zero so Fraction(result) <= a exactly."""
    f = float(a)
    if Fraction(f) > a:
        f = math.nextafter(f, 0.0)
    return f


def _build(params: MisalignerParams, alpha: float, codewords: list[tuple[int, ...]]) -> Misaligner:
    return Misaligner(
        MisalignerParams(params.m, len(codewords), params.t, alpha), tuple(codewords)
    )


def _candidate_consistent(
    p: MisalignerParams, collection: list[tuple[int, ...]], cand: tuple[int, ...]
) -> bool:
    """Exact property checks restricted to combinations involving the
    candidate. If the collection already verifies and this passes, the
    extended collection verifies too (every combination either avoids the
    candidate or was just checked)."""
    temp = _build(p, p.alpha, collection + [cand])
    f = len(collection)
    return (
        check_block_and_half(temp, focus=f).passed
        and check_short_intervals(temp, focus=f).passed
        and check_block_vs_substring(temp, focus=f).passed
    )


def _hitting_set_prune(report: VerifyReport, k: int) -> list[int]:
    """Indices of a violation-free subcollection.

    Greedy hitting set over the recorded violating combinations: repeatedly
    drop the codeword involved in the most remaining violations. Violations of
    a subset are a subset of the recorded violations, so the survivors verify
    clean without re-running the checkers.
    """
    sets = [s for rep in report.properties.values() for s in rep.violation_sets]
    alive = set(range(k))
    while sets:
        counts: dict[int, int] = {}
        for s in sets:
            for c in s:
                counts[c] = counts.get(c, 0) + 1
        drop = max(counts.items(), key=lambda kv: (kv[1], -kv[0]))[0]
        alive.discard(drop)
        sets = [s for s in sets if drop not in s]
    return sorted(alive)


def search(config: SearchConfig) -> SearchResult:
    """Greedy accretion behind the statistical filters, then verify-and-prune.

    Returns a misaligner passing conservative verification; when the candidate
    budget runs out first, the best verified subset is returned with a
    diagnostic. Deterministic for a fixed config.
    """
    p = config.params
    rng = SplitMix64(config.seed)
    stats = build_stat_tables(p, config.preprocess_count, config.rank_frac, rng.spawn(1).next_u64())
    draw_rng = rng.spawn(2)

    used = 0
    diagnostics: list[str] = []

    def draw() -> tuple[int, ...] | None:
        nonlocal used
        if used >= config.candidate_budget:
            return None
        used += 1
        return random_codeword(p.m, p.t, draw_rng)

    collection: list[tuple[int, ...]] = []

    if p.k < 3:
        while len(collection) < p.k:
            c = draw()
            if c is None:
                break
            if c not in collection:
                collection.append(c)
        mis = _build(p, p.alpha, collection)
        rep = verify(mis)  # properties 2-4 vacuous below three codewords
        return SearchResult(
            misaligner=mis,
            verified=rep.passed,
            achieved_alpha=rep.achieved_alpha,
            candidates_used=used,
            requested=p,
            report=rep,
        )

    floor = requirement_floor(p)
    last_report: VerifyReport | None = None
    while True:
        if len(collection) == p.k:
            mis = _build(p, p.alpha, collection)
            last_report = verify(mis)
            if last_report.passed:
                achieved = last_report.achieved_alpha
                final = _build(p, _safe_float_alpha(achieved), collection)
                return SearchResult(
                    misaligner=final,
                    verified=True,
                    achieved_alpha=achieved,
                    candidates_used=used,
                    requested=p,
                    report=last_report,
                    diagnostics=diagnostics,
                )
            survivors = _hitting_set_prune(last_report, len(collection))
            diagnostics.append(
                f"verification failed with "
                f"{sum(len(r.violation_sets) for r in last_report.properties.values())} "
                f"violations; keeping {len(survivors)}/{len(collection)} codewords"
            )
            collection = [collection[i] for i in survivors]
        c = draw()
        if c is None:
            break
        if c in collection:
            continue
        if not passes_filters(stats, c, collection, floor=floor):
            continue
        if len(collection) >= 3 and not _candidate_consistent(p, collection, c):
            continue
        collection.append(c)
        if len(collection) == 3 and not verify(_build(p, p.alpha, collection)).passed:
            # the three seeds must jointly satisfy all properties
            collection.pop()

    # budget exhausted: prune to a verified subset and report the shortfall
    diagnostics.append(
        f"candidate budget {config.candidate_budget} exhausted with "
        f"{len(collection)}/{p.k} codewords"
    )
    while collection:
        mis = _build(p, p.alpha, collection)
        last_report = verify(mis)
        if last_report.passed:
            achieved = last_report.achieved_alpha
            alpha = _safe_float_alpha(achieved) if achieved else p.alpha
            return SearchResult(
                misaligner=_build(p, alpha, collection),
                verified=True,
                achieved_alpha=achieved,
                candidates_used=used,
                requested=p,
                report=last_report,
                diagnostics=diagnostics,
            )
        survivors = _hitting_set_prune(last_report, len(collection))
        if len(survivors) == len(collection):
            break
        collection = [collection[i] for i in survivors]
    raise RuntimeError("search pruned away every codeword; raise the budget or lower alpha")
