"""Misaligners: wildcard codeword sets whose instantiations keep large edit
distance against substrings of codeword concatenations.

The four defining properties and their checkers:

1. wildcard pattern: position i holds a wildcard iff i == 1 (mod t);
2. short intervals: every substring s (length <= 3m-2) of any concatenation
   of three distinct codewords has edit distance equal to Hamming distance
   under every pair of instantiations;
3. block vs substring: every codeword keeps edit distance >= alpha*m from
   every such substring of comparable length (nowhere-vertically against its
   own occurrence when it appears among the three);
4. block-and-a-half vs substring: a codeword with partial neighbours keeps
   nowhere-vertical distance >= alpha*|s| from its extensions on both sides.

Property 2 is checked through the sound conservative criterion
nv_edit_wild(s, s) >= gamma(s): a violating instantiation pair would contain
a nowhere-vertical interval cheaper than its Hamming cost, which is at most
the wildcard count of that interval. Exact mode additionally enumerates
instantiation pairs (gamma-capped) for substrings spanning at most two
codewords; three-block spans stay on the conservative criterion, whose
soundness does not depend on the enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .metrics import WILDCARD, batch_edit_sweep, format_symbols, parse_symbols

_PAD_X = -5
_PAD_Y = -6
_NO_BAN = 10**6

Codeword = tuple[int, ...]


@dataclass(frozen=True)
class MisalignerParams:
    m: int
    k: int
    t: int
    alpha: float

    def __post_init__(self):
        if self.m <= 0 or self.k <= 0 or self.t <= 0:
            raise ValueError("m, k, t must be positive")
        if self.m % self.t != 0:
            raise ValueError(f"t={self.t} must divide m={self.m}")
        if not 0 < self.alpha <= 0.5:
            raise ValueError(f"alpha must lie in (0, 1/2], got {self.alpha}")


@dataclass(frozen=True)
class Misaligner:
    params: MisalignerParams
    codewords: tuple[Codeword, ...]

    def __post_init__(self):
        p = self.params
        if len(self.codewords) != p.k:
            raise ValueError(f"expected {p.k} codewords, got {len(self.codewords)}")
        if len(set(self.codewords)) != len(self.codewords):
            raise ValueError("codewords must be pairwise distinct")
        for idx, c in enumerate(self.codewords):
            if len(c) != p.m:
                raise ValueError(f"codeword {idx} has length {len(c)}, expected {p.m}")
            if not check_wildcard_pattern(c, p.t):
                raise ValueError(f"codeword {idx} violates the wildcard pattern")
            for s in c:
                if s not in (0, 1, WILDCARD):
                    raise ValueError(f"codeword {idx} contains non-binary symbol {s}")


def check_wildcard_pattern(c: Codeword, t: int) -> bool:
    """True iff c[i] is a wildcard exactly when i == 1 (mod t), 1-based."""
    return all((s == WILDCARD) == (i % t == 1 or t == 1) for i, s in enumerate(c, start=1))


def required_t(m: int, alpha: float, epsilon: float) -> int:
    """Wildcard period needed for isometry: ceil(1 / ((1-eps)*alpha - 1/(3m-1)))."""
    if m <= 0:
        raise ValueError("m must be positive")
    denom = (1 - Fraction(epsilon)) * Fraction(alpha) - Fraction(1, 3 * m - 1)
    if denom <= 0:
        raise ValueError(
            f"(1-epsilon)*alpha = {(1 - epsilon) * alpha:.6f} does not exceed "
            f"1/(3m-1) = {1 / (3 * m - 1):.6f}; these parameters cannot embed"
        )
    return math.ceil(1 / denom)


@dataclass(frozen=True)
class Witness:
    prop: str
    codewords: tuple[int, ...]
    detail: str
    measured: int
    required: float


@dataclass
class PropertyReport:
    prop: str
    passed: bool
    checked: int
    witnesses: list[Witness] = field(default_factory=list)
    violation_counts: dict[int, int] = field(default_factory=dict)
    # codeword-index sets of every violating combination; a subset of the
    # collection hitting none of these sets verifies clean without a re-run
    violation_sets: list[tuple[int, ...]] = field(default_factory=list)
    # (slen, min measured cost) pairs supporting the achieved-alpha computation
    minima: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class VerifyReport:
    passed: bool
    properties: dict[str, PropertyReport]
    removal_suggestions: list[int]
    achieved_alpha: Fraction | None

    def witness_summary(self, limit: int = 5) -> list[str]:
        out = []
        for rep in self.properties.values():
            for w in rep.witnesses[:limit]:
                out.append(
                    f"{w.prop}: codewords {w.codewords} {w.detail} "
                    f"measured {w.measured} < required {w.required:.4g}"
                )
        return out


_WITNESS_CAP = 200


def _note_violation(rep: PropertyReport, witness: Witness) -> None:
    rep.passed = False
    involved = tuple(sorted(set(witness.codewords)))
    rep.violation_sets.append(involved)
    for c in involved:
        rep.violation_counts[c] = rep.violation_counts.get(c, 0) + 1
    if len(rep.witnesses) < _WITNESS_CAP:
        rep.witnesses.append(witness)


def _pad_rows(rows: list[Codeword], width: int, pad: int) -> np.ndarray:
    out = np.full((len(rows), width), pad, dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out


def _wild_prefix_counts(pattern: Codeword) -> np.ndarray:
    """counts[l] = number of wildcards among the first l symbols."""
    counts = np.zeros(len(pattern) + 1, dtype=np.int64)
    for i, s in enumerate(pattern, start=1):
        counts[i] = counts[i - 1] + (1 if s == WILDCARD else 0)
    return counts


# ---------------------------------------------------------------------------
# Property 1
# ---------------------------------------------------------------------------


def check_rate_of_wildcards(mis: Misaligner) -> PropertyReport:
    rep = PropertyReport("rate-of-wildcards", True, checked=len(mis.codewords))
    for idx, c in enumerate(mis.codewords):
        if not check_wildcard_pattern(c, mis.params.t):
            _note_violation(
                rep,
                Witness("rate-of-wildcards", (idx,), "pattern mismatch", 0, 0.0),
            )
    return rep


# ---------------------------------------------------------------------------
# Property 2
# ---------------------------------------------------------------------------


def check_short_intervals(
    mis: Misaligner, mode: str = "conservative", gamma_cap: int = 10, focus: int | None = None
) -> PropertyReport:
    """Short-interval check over every substring (length <= 3m-2) of every
    concatenation of three distinct codewords.

    Conservative criterion: nv_edit_wild(s, s) >= gamma(s). ``mode='exact'``
    additionally enumerates instantiation pairs for substrings within two
    consecutive codewords whose wildcard count is at most ``gamma_cap``.
    ``focus`` restricts the scan to combinations involving that codeword
    (incremental check after adding one codeword to a verified collection).
    """
    if mode not in ("conservative", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    p = mis.params
    m, k, cap = p.m, p.k, 3 * p.m - 2
    rep = PropertyReport("short-intervals", True, checked=0)
    if k < 3:
        return rep  # vacuous: the property quantifies distinct triples

    words = mis.codewords
    pair_ids = [
        (a, b)
        for a in range(k)
        for b in range(k)
        if a != b and (focus is None or focus in (a, b))
    ]

    # substrings within two consecutive codewords, every start, all ends at once
    pair_concats = [words[a] + words[b] for a, b in pair_ids]
    gamma = _wild_prefix_counts(pair_concats[0])  # pattern shared by all pairs
    for start in range(2 * m):
        width = 2 * m - start
        xs = np.array([c[start:] for c in pair_concats], dtype=np.int64)
        diag = batch_edit_sweep(xs, xs, wild=True, banned_offset=[0] * len(xs), record="diagonals")
        lmax = min(width, cap)
        need = gamma[start + 1 : start + lmax + 1] - gamma[start]
        got = diag[:, 1 : lmax + 1]
        rep.checked += len(xs) * lmax
        bad = np.nonzero(got < need)
        for row, li in zip(*bad):
            a, b = pair_ids[row]
            length = int(li) + 1
            _note_violation(
                rep,
                Witness(
                    "short-intervals",
                    (a, b),
                    f"substring of c{a}*c{b} at offset {start + 1}, length {length}",
                    int(got[row, li]),
                    float(need[li]),
                ),
            )

    # substrings spanning three codewords: nonempty suffix + full middle + nonempty prefix
    triple_ids = [
        (a, b, c)
        for a in range(k)
        for b in range(k)
        for c in range(k)
        if a != b and b != c and a != c and (focus is None or focus in (a, b, c))
    ]
    for l1 in range(1, m + 1):
        if l1 + m + 1 > cap:
            break
        contents = [words[a][m - l1 :] + words[b] + words[c] for a, b, c in triple_ids]
        xs = np.array(contents, dtype=np.int64)
        diag = batch_edit_sweep(xs, xs, wild=True, banned_offset=[0] * len(xs), record="diagonals")
        gamma3 = _wild_prefix_counts(contents[0])
        lo, hi = l1 + m + 1, min(l1 + 2 * m, cap)
        need = gamma3[lo : hi + 1]
        got = diag[:, lo : hi + 1]
        rep.checked += len(xs) * max(0, hi - lo + 1)
        bad = np.nonzero(got < need)
        for row, li in zip(*bad):
            a, b, c = triple_ids[row]
            length = lo + int(li)
            _note_violation(
                rep,
                Witness(
                    "short-intervals",
                    (a, b, c),
                    f"suffix{l1}(c{a})*c{b}*prefix(c{c}), length {length}",
                    int(got[row, li]),
                    float(need[li]),
                ),
            )

    if mode == "exact":
        _check_short_intervals_exact(mis, rep, gamma_cap, pair_ids)
    return rep


def _instantiation_fillings(gamma: int) -> np.ndarray:
    """All binary fillings of gamma wildcard slots, one per row."""
    if gamma == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((2,) * gamma).reshape(gamma, -1).T
    return grids.astype(np.int64)


def _check_short_intervals_exact(
    mis: Misaligner,
    rep: PropertyReport,
    gamma_cap: int,
    pair_ids: list[tuple[int, int]],
) -> None:
    """Enumerate instantiation pairs of two-codeword substrings and require
    edit == Hamming directly. Complement symmetry halves the pair count."""
    p = mis.params
    m, cap = p.m, 3 * p.m - 2
    words = mis.codewords
    pattern_gamma = _wild_prefix_counts(words[0] + words[0])

    for start in range(2 * m):
        width = min(2 * m - start, cap)
        # largest prefix of the suffix whose wildcard count fits the cap
        total = pattern_gamma[start : start + width + 1] - pattern_gamma[start]
        lmax = int(np.searchsorted(total, gamma_cap + 1) - 1)
        gamma = int(total[lmax])
        if gamma < 2:
            continue  # a violating pair needs Hamming distance >= 2
        fillings = _instantiation_fillings(gamma)
        # complement symmetry: restrict x-fillings to those starting with 0
        fx = fillings[fillings[:, 0] == 0]
        fy = fillings
        xs_rows = []
        ys_rows = []
        owners = []
        for row, (a, b) in enumerate(pair_ids):
            content = (words[a] + words[b])[start : start + lmax]
            wild_pos = [i for i, s in enumerate(content) if s == WILDCARD]
            base = np.array(content, dtype=np.int64)
            inst_x = np.repeat(base[None, :], len(fx), axis=0)
            inst_x[:, wild_pos] = fx
            inst_y = np.repeat(base[None, :], len(fy), axis=0)
            inst_y[:, wild_pos] = fy
            gx = np.repeat(inst_x, len(fy), axis=0)
            gy = np.tile(inst_y, (len(fx), 1))
            xs_rows.append(gx)
            ys_rows.append(gy)
            owners.extend([(a, b)] * len(gx))
        xs = np.concatenate(xs_rows, axis=0)
        ys = np.concatenate(ys_rows, axis=0)
        # chunk to bound memory
        chunk = max(1, 200_000 // max(1, lmax))
        for base_row in range(0, len(xs), chunk):
            cx = xs[base_row : base_row + chunk]
            cy = ys[base_row : base_row + chunk]
            diag = batch_edit_sweep(cx, cy, record="diagonals")
            ham = np.cumsum(cx != cy, axis=1)
            rep.checked += cx.shape[0] * lmax
            bad = np.nonzero(diag[:, 1:] < ham)
            for row, li in zip(*bad):
                a, b = owners[base_row + int(row)]
                _note_violation(
                    rep,
                    Witness(
                        "short-intervals-exact",
                        (a, b),
                        f"instantiated substring of c{a}*c{b} at offset {start + 1},"
                        f" length {int(li) + 1}",
                        int(diag[row, int(li) + 1]),
                        float(ham[row, li]),
                    ),
                )


# ---------------------------------------------------------------------------
# Properties 3 and 4
# ---------------------------------------------------------------------------


def _window_bounds(m: int) -> tuple[int, int]:
    """Integer lengths inside the widest useful window (m/2, 3m/2), open."""
    return m // 2 + 1, math.ceil(3 * m / 2) - 1


def check_block_vs_substring(
    mis: Misaligner, alpha: float | None = None, focus: int | None = None
) -> PropertyReport:
    """Property 3: each codeword vs every comparable-length substring of a
    three-codeword concatenation; the codeword's own occurrence (when present)
    is compared nowhere-vertically. Lengths outside ((1-alpha)m, (1+alpha)m)
    are certified by the length gap alone and skipped.

    The scan always covers the widest window (alpha = 1/2) and records
    per-length minima so the achieved alpha can be derived afterwards.
    ``focus`` restricts to combinations involving that codeword.
    """
    p = mis.params
    alpha_f = Fraction(p.alpha if alpha is None else alpha)
    m, k = p.m, p.k
    rep = PropertyReport("block-vs-substring", True, checked=0)
    if k < 3:
        return rep
    words = mis.codewords
    wlo, whi = _window_bounds(m)
    min_by_len: dict[int, int] = {}

    def relevant(ids: tuple[int, ...]) -> bool:
        return focus is None or focus in ids

    anum, aden = alpha_f.numerator, alpha_f.denominator

    def consume(costs, owners, col_lo, col_hi, detail_of):
        """costs: (B, width+1) last rows; cols in [col_lo, col_hi] are the
        substring lengths |s| to evaluate."""
        if col_hi < col_lo:
            return
        block = costs[:, col_lo : col_hi + 1]
        rep.checked += block.size
        col_mins = block.min(axis=0)
        for off, cmin in enumerate(col_mins):
            slen = col_lo + off
            prev = min_by_len.get(slen)
            if prev is None or cmin < prev:
                min_by_len[slen] = int(cmin)
        # violations at alpha: |s| strictly inside the alpha window, cost below alpha*m
        slens = np.arange(col_lo, col_hi + 1)
        eligible = np.abs(slens - m) * aden < anum * m
        bad = np.nonzero(eligible[None, :] & (block * aden < anum * m))
        for row, off in zip(*bad):
            slen = col_lo + int(off)
            _note_violation(
                rep,
                Witness(
                    "block-vs-substring",
                    owners[row],
                    detail_of(int(row), slen),
                    int(block[row, off]),
                    float(alpha_f * m),
                ),
            )

    # (A)+(B): substrings inside one codeword or across one boundary:
    # s = suffix_l(ca) * prefix(cb), l in [1, m]; single-block substrings are
    # the rows of (A) below.
    pair_ids = [(a, b) for a in range(k) for b in range(k) if a != b]
    for l in range(1, m + 1):
        xs_rows, ys_rows, bans, owners = [], [], [], []
        for a, b in pair_ids:
            content = words[a][m - l :] + words[b]
            for c in range(k):
                if not relevant((c, a, b)):
                    continue
                xs_rows.append(words[c])
                ys_rows.append(content)
                if c == a:
                    bans.append(l - m)
                elif c == b:
                    bans.append(l)
                else:
                    bans.append(_NO_BAN)
                owners.append((c, a, b))
        if not owners:
            continue
        xs = np.array(xs_rows, dtype=np.int64)
        ys = _pad_rows(ys_rows, l + m, _PAD_Y)
        costs = batch_edit_sweep(xs, ys, wild=True, banned_offset=bans, record="last_row")
        col_lo = max(l + 1, wlo)  # ends inside cb (r >= 1); shorter handled at smaller l
        col_hi = min(l + m, whi)
        consume(
            costs,
            owners,
            col_lo,
            col_hi,
            lambda row, slen, _l=l, _o=owners: (
                f"c{_o[row][0]} vs suffix{_l}(c{_o[row][1]})*prefix(c{_o[row][2]}), |s|={slen}"
            ),
        )

    # (A) single-block substrings: s = cb[j : j+slen]
    for j in range(0, m):
        xs_rows, ys_rows, bans, owners = [], [], [], []
        for b in range(k):
            content = words[b][j:]
            for c in range(k):
                if not relevant((c, b)):
                    continue
                xs_rows.append(words[c])
                ys_rows.append(content)
                bans.append(-j if c == b else _NO_BAN)
                owners.append((c, b))
        if not owners:
            continue
        xs = np.array(xs_rows, dtype=np.int64)
        ys = _pad_rows(ys_rows, m, _PAD_Y)
        costs = batch_edit_sweep(xs, ys, wild=True, banned_offset=bans, record="last_row")
        col_lo, col_hi = wlo, min(m - j, whi)
        consume(
            costs,
            owners,
            col_lo,
            col_hi,
            lambda row, slen, _j=j, _o=owners: (
                f"c{_o[row][0]} vs c{_o[row][1]}[{_j + 1}..{_j + slen}], |s|={slen}"
            ),
        )

    # (C) substrings spanning three codewords; possible only when the window
    # admits lengths >= m + 2
    triple_ids = [
        (a, b, c)
        for a in range(k)
        for b in range(k)
        for c in range(k)
        if a != b and b != c and a != c
    ]
    max_l1 = whi - m - 1  # l1 + m + r3 <= whi with r3 >= 1
    for l1 in range(1, max(0, max_l1) + 1):
        xs_rows, ys_rows, bans, owners = [], [], [], []
        for a, b, cc in triple_ids:
            content = words[a][m - l1 :] + words[b] + words[cc]
            for c in range(k):
                if not relevant((c, a, b, cc)):
                    continue
                xs_rows.append(words[c])
                ys_rows.append(content)
                if c == a:
                    bans.append(l1 - m)
                elif c == b:
                    bans.append(l1)
                elif c == cc:
                    bans.append(l1 + m)
                else:
                    bans.append(_NO_BAN)
                owners.append((c, a, b, cc))
        if not owners:
            continue
        xs = np.array(xs_rows, dtype=np.int64)
        width = min(l1 + 2 * m, whi)
        ys = _pad_rows([r[: width] for r in ys_rows], width, _PAD_Y)
        costs = batch_edit_sweep(xs, ys, wild=True, banned_offset=bans, record="last_row")
        col_lo, col_hi = l1 + m + 1, width
        consume(
            costs,
            owners,
            col_lo,
            col_hi,
            lambda row, slen, _l1=l1, _o=owners: (
                f"c{_o[row][0]} vs suffix{_l1}(c{_o[row][1]})*c{_o[row][2]}"
                f"*prefix(c{_o[row][3]}), |s|={slen}"
            ),
        )

    rep.minima = sorted(min_by_len.items())
    return rep


def check_block_and_half(
    mis: Misaligner, alpha: float | None = None, focus: int | None = None
) -> PropertyReport:
    """Property 4: nowhere-vertical distance between a block with one partial
    neighbour and its extension by the other neighbour, both directions.

    4(a): s = suffix_l1(c1)*c2 (l1 in [0, m-1]), s' = s*prefix_l3(c3)
    (l3 in [0, m]); require nv_edit_wild(s, s') >= alpha*|s|.
    4(b): mirror image, checked on reversed strings.
    ``focus`` restricts to triples involving that codeword.
    """
    p = mis.params
    alpha_f = Fraction(p.alpha if alpha is None else alpha)
    m, k = p.m, p.k
    rep = PropertyReport("block-and-a-half", True, checked=0)
    if k < 3:
        return rep
    words = mis.codewords
    triple_ids = [
        (a, b, c)
        for a in range(k)
        for b in range(k)
        for c in range(k)
        if a != b and b != c and a != c and (focus is None or focus in (a, b, c))
    ]
    if not triple_ids:
        return rep
    min_by_len: dict[int, int] = {}

    anum, aden = alpha_f.numerator, alpha_f.denominator

    def scan(side: str, l_outer: int, xs_rows, ys_rows, slen: int):
        xs = np.array(xs_rows, dtype=np.int64)
        ys = np.array(ys_rows, dtype=np.int64)
        costs = batch_edit_sweep(
            xs, ys, wild=True, banned_offset=[0] * len(xs), record="last_row"
        )
        block = costs[:, slen : slen + m + 1]  # extensions 0..m of the other side
        rep.checked += block.size
        cmin = int(block.min())
        prev = min_by_len.get(slen)
        if prev is None or cmin < prev:
            min_by_len[slen] = cmin
        bad = np.nonzero(block * aden < anum * slen)
        for row, ext in zip(*bad):
            _note_violation(
                rep,
                Witness(
                    "block-and-a-half",
                    triple_ids[row],
                    f"{side}: l={l_outer}, ext={int(ext)}, |s|={slen}",
                    int(block[row, ext]),
                    float(alpha_f * slen),
                ),
            )

    # 4(a): rows suffix_l1(c1)*c2, cols rows*c3, read extensions l3 = 0..m
    for l1 in range(0, m):
        xs_rows = [words[a][m - l1 :] + words[b] for a, b, c in triple_ids]
        ys_rows = [words[a][m - l1 :] + words[b] + words[c] for a, b, c in triple_ids]
        scan("right", l1, xs_rows, ys_rows, l1 + m)

    # 4(b): s = c2*prefix_l3(c3), s' = suffix_l1(c1)*s, on reversed strings
    for l3 in range(0, m):
        xs_rows = [(words[b] + words[c][:l3])[::-1] for a, b, c in triple_ids]
        ys_rows = [
            (words[b] + words[c][:l3])[::-1] + words[a][::-1] for a, b, c in triple_ids
        ]
        scan("left", l3, xs_rows, ys_rows, m + l3)

    rep.minima = sorted(min_by_len.items())
    return rep


# ---------------------------------------------------------------------------
# Aggregate verification
# ---------------------------------------------------------------------------


def achieved_alpha(reports: dict[str, PropertyReport], m: int) -> Fraction | None:
    """Largest alpha at which the recorded minima satisfy properties 3 and 4.

    A length-|s| entry constrains property 3 only once |s| enters the open
    window ((1-a)m, (1+a)m), so each entry caps a at
    max(||s|-m|/m, cost/m); property 4 entries cap a at cost/|s|.
    """
    if not reports["short-intervals"].passed or not reports["rate-of-wildcards"].passed:
        return None
    best = Fraction(1, 2)
    for slen, cost in reports["block-vs-substring"].minima:
        best = min(best, max(Fraction(abs(slen - m), m), Fraction(cost, m)))
    for slen, cost in reports["block-and-a-half"].minima:
        best = min(best, Fraction(cost, slen))
    return best if best > 0 else None


def verify(mis: Misaligner, mode: str = "conservative", gamma_cap: int = 10) -> VerifyReport:
    """Run properties 1-4, aggregate, and suggest codewords to remove."""
    reports = {
        "rate-of-wildcards": check_rate_of_wildcards(mis),
        "short-intervals": check_short_intervals(mis, mode=mode, gamma_cap=gamma_cap),
        "block-vs-substring": check_block_vs_substring(mis),
        "block-and-a-half": check_block_and_half(mis),
    }
    passed = all(r.passed for r in reports.values())
    counts: dict[int, int] = {}
    for r in reports.values():
        for idx, c in r.violation_counts.items():
            counts[idx] = counts.get(idx, 0) + c
    suggestions = [idx for idx, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))]
    return VerifyReport(
        passed=passed,
        properties=reports,
        removal_suggestions=suggestions,
        achieved_alpha=achieved_alpha(reports, mis.params.m),
    )


# ---------------------------------------------------------------------------
# File format: line 1 "m k t alpha", then k codeword lines over {0,1,*}
# ---------------------------------------------------------------------------


def dumps_misaligner(mis: Misaligner) -> str:
    p = mis.params
    lines = [f"{p.m} {p.k} {p.t} {p.alpha!r}"]
    lines.extend(format_symbols(c, compact=True) for c in mis.codewords)
    return "\n".join(lines) + "\n"


def loads_misaligner(text: str) -> Misaligner:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty misaligner file")
    head = lines[0].split()
    if len(head) != 4:
        raise ValueError("misaligner header must be 'm k t alpha'")
    m, k, t = int(head[0]), int(head[1]), int(head[2])
    alpha = float(head[3])
    codewords = tuple(parse_symbols(ln, compact_ok=True) for ln in lines[1 : k + 1])
    if len(codewords) != k:
        raise ValueError(f"expected {k} codewords, found {len(codewords)}")
    return Misaligner(MisalignerParams(m, k, t, alpha), codewords)
