"""Ordered statistics decoding with local constraints (LCOSD) over GF(2).

Given a binary parity-check matrix and per-position LLRs, the decoder:

1. sorts positions by reliability |LLR| and takes the k' + delta most
   reliable ones as the MRIS (k' = N - rank);
2. Gauss-Jordan reduces with pivots preferred among the complement
   (least-reliable) positions, so rows that fail to pivot there become
   local constraint rows supported inside the MRIS, and every position
   outside the MRIS is the pivot of exactly one systematic row;
3. enumerates MRIS bit patterns best-first by cumulative flip cost away
   from the hard decision, keeping only patterns that satisfy the local
   constraints, until l_max candidates are collected;
4. re-encodes each pattern through the systematic rows and returns the
   candidate minimizing the quality sum(c_i * LLR_i).

Cost ties in the enumeration are broken lexicographically on the flipped
ranks (ranks in ascending-reliability order inside the MRIS).  The heap
stores flip sets as rank-reversed bitmasks so that tie comparison is a
plain word comparison, and tracks the constraint parities incrementally so
legality is O(1) per popped pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .gf2 import BitMatrix, ge_reduce


@dataclass(frozen=True)
class LcosdConfig:
    """Constraint degree delta and maximum list size l_max."""

    delta: int = 8
    l_max: int = 1024

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")
        if self.l_max < 1:
            raise ValueError("l_max must be at least 1")


@dataclass
class LcosdWorkspace:
    """Reliability ordering and systematic decomposition of one decode.

    `mris` holds the MRIS positions in ascending index order (the order
    patterns are expressed in); `mris_by_rel` holds the same positions in
    ascending reliability order, defining the flip ranks.  Constraint rows
    have support inside the MRIS only; each non-MRIS position is the pivot
    of exactly one systematic row.
    """

    n_cols: int
    delta: int
    delta_eff: int
    perm: np.ndarray
    mris: np.ndarray
    mris_by_rel: np.ndarray
    constraint_rows: np.ndarray
    systematic_rows: np.ndarray
    sys_pivots: np.ndarray
    _constraint_support: np.ndarray  # constraint rows restricted to mris order
    _sys_support: np.ndarray  # systematic rows restricted to mris order


@dataclass
class CandidateList:
    """Enumerated candidates: null-space vectors with their flip costs and
    qualities, in enumeration (nondecreasing flip cost) order."""

    vectors: np.ndarray  # (L, N) uint8
    flip_costs: np.ndarray  # (L,)
    qualities: np.ndarray  # (L,)

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass
class LcosdResult:
    codeword: np.ndarray
    quality: float
    list_size: int
    candidates: CandidateList


def select_mris(Hp: BitMatrix, reliabilities, delta: int) -> LcosdWorkspace:
    """Pick the MRIS and split the reduced rows into constraint/systematic.

    Positions sort by reliability descending (ties: ascending index); the
    MRIS is the first min(N, k' + delta) of them.  Gauss-Jordan runs with
    the full ascending-reliability column preference, so all complement
    columns are tried first.  If the complement columns are rank deficient,
    the unpivoted ones fold into the MRIS and delta_eff exceeds delta.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    rel = np.asarray(reliabilities, dtype=np.float64)
    N = Hp.cols
    if rel.size != N:
        raise ValueError("reliability vector length does not match matrix")
    if not Hp.data.any():
        raise ValueError("check matrix is zero")
    perm = np.lexsort((np.arange(N), -rel))  # descending reliability
    asc = perm[::-1].copy()
    res = ge_reduce(Hp, asc)
    kprime = N - res.rank
    mris_size = min(N, kprime + delta)
    comp_set = frozenset(int(c) for c in asc[: N - mris_size])

    dense = res.reduced.to_dense()
    sys_rows, sys_pivots, con_rows = [], [], []
    for i, col in enumerate(res.pivot_cols):
        if col in comp_set:
            sys_rows.append(dense[i])
            sys_pivots.append(col)
        else:
            con_rows.append(dense[i])
    pivot_set = frozenset(sys_pivots)
    mris = np.array(sorted(set(range(N)) - pivot_set), dtype=np.int64)
    mris_by_rel = np.array([p for p in asc if p not in pivot_set], dtype=np.int64)

    con = (
        np.array(con_rows, dtype=np.uint8) if con_rows else np.zeros((0, N), dtype=np.uint8)
    )
    sys_arr = (
        np.array(sys_rows, dtype=np.uint8) if sys_rows else np.zeros((0, N), dtype=np.uint8)
    )
    return LcosdWorkspace(
        n_cols=N,
        delta=delta,
        delta_eff=con.shape[0],
        perm=perm,
        mris=mris,
        mris_by_rel=mris_by_rel,
        constraint_rows=con,
        systematic_rows=sys_arr,
        sys_pivots=np.array(sys_pivots, dtype=np.int64),
        _constraint_support=con[:, mris],
        _sys_support=sys_arr[:, mris],
    )


@njit(cache=True)
def _heap_less(cost, mask, i, j, W):
    ci = cost[i]
    cj = cost[j]
    if ci != cj:
        return ci < cj
    # Rank-reversed masks: larger word value == lex-smaller flipped-rank
    # sequence, which is the tie winner.
    for w in range(W):
        if mask[i, w] != mask[j, w]:
            return mask[i, w] > mask[j, w]
    return False


@njit(cache=True)
def _heap_swap(cost, sy, rnk, mask, i, j, W):
    cost[i], cost[j] = cost[j], cost[i]
    sy[i], sy[j] = sy[j], sy[i]
    rnk[i], rnk[j] = rnk[j], rnk[i]
    for w in range(W):
        t = mask[i, w]
        mask[i, w] = mask[j, w]
        mask[j, w] = t


@njit(cache=True)
def _sift_up(cost, sy, rnk, mask, idx, W):
    while idx > 0:
        parent = (idx - 1) >> 1
        if _heap_less(cost, mask, idx, parent, W):
            _heap_swap(cost, sy, rnk, mask, idx, parent, W)
            idx = parent
        else:
            break


@njit(cache=True)
def _sift_down(cost, sy, rnk, mask, size, W):
    idx = 0
    while True:
        child = 2 * idx + 1
        if child >= size:
            break
        right = child + 1
        if right < size and _heap_less(cost, mask, right, child, W):
            child = right
        if _heap_less(cost, mask, child, idx, W):
            _heap_swap(cost, sy, rnk, mask, idx, child, W)
            idx = child
        else:
            break


@njit(cache=True)
def _enumerate_kernel(costs, sig, target, K, l_max, max_pops):
    W = (K + 63) // 64
    one = np.uint64(1)
    cap = 1 << 15
    h_cost = np.empty(cap)
    h_sy = np.empty(cap, dtype=np.uint64)
    h_rnk = np.empty(cap, dtype=np.int16)
    h_mask = np.zeros((cap, W), dtype=np.uint64)
    flips = np.zeros((l_max, K), dtype=np.uint8)
    out_costs = np.zeros(l_max)

    h_cost[0] = 0.0
    h_sy[0] = np.uint64(0)
    h_rnk[0] = -1
    size = 1
    count = 0
    pops = 0
    pmask = np.zeros(W, dtype=np.uint64)

    while size > 0 and count < l_max and pops < max_pops:
        pops += 1
        pcost = h_cost[0]
        psy = h_sy[0]
        prank = h_rnk[0]
        for w in range(W):
            pmask[w] = h_mask[0, w]
        size -= 1
        if size > 0:
            h_cost[0] = h_cost[size]
            h_sy[0] = h_sy[size]
            h_rnk[0] = h_rnk[size]
            for w in range(W):
                h_mask[0, w] = h_mask[size, w]
            _sift_down(h_cost, h_sy, h_rnk, h_mask, size, W)

        if psy == target:
            for rr in range(K):
                sh = np.uint64(63 - (rr & 63))
                flips[count, rr] = np.uint8((pmask[rr >> 6] >> sh) & one)
            out_costs[count] = pcost
            count += 1

        nr = prank + 1
        if nr < K:
            if size + 2 > cap:
                newcap = cap * 2
                nc = np.empty(newcap)
                nc[:size] = h_cost[:size]
                h_cost = nc
                ns = np.empty(newcap, dtype=np.uint64)
                ns[:size] = h_sy[:size]
                h_sy = ns
                nr_arr = np.empty(newcap, dtype=np.int16)
                nr_arr[:size] = h_rnk[:size]
                h_rnk = nr_arr
                nm = np.zeros((newcap, W), dtype=np.uint64)
                nm[:size] = h_mask[:size]
                h_mask = nm
                cap = newcap
            sh_new = np.uint64(63 - (nr & 63))
            w_new = nr >> 6
            # extension: add rank nr
            i = size
            h_cost[i] = pcost + costs[nr]
            h_sy[i] = psy ^ sig[nr]
            h_rnk[i] = nr
            for w in range(W):
                h_mask[i, w] = pmask[w]
            h_mask[i, w_new] |= one << sh_new
            size += 1
            _sift_up(h_cost, h_sy, h_rnk, h_mask, size - 1, W)
            if prank >= 0:
                # replacement: swap rank prank for rank nr
                sh_old = np.uint64(63 - (prank & 63))
                w_old = prank >> 6
                i = size
                h_cost[i] = pcost - costs[prank] + costs[nr]
                h_sy[i] = psy ^ sig[prank] ^ sig[nr]
                h_rnk[i] = nr
                for w in range(W):
                    h_mask[i, w] = pmask[w]
                h_mask[i, w_old] &= ~(one << sh_old)
                h_mask[i, w_new] |= one << sh_new
                size += 1
                _sift_up(h_cost, h_sy, h_rnk, h_mask, size - 1, W)
    return flips, out_costs, count


# Pop budget: expected pops are about l_max * 2**delta_eff; the cap only
# guards against degenerate cost landscapes.
_POP_BUDGET_FLOOR = 1 << 22


def enumerate_candidates(
    ws: LcosdWorkspace, llrs, l_max: int, max_pops: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Legal MRIS bit patterns in nondecreasing flip-cost order.

    The baseline is the elementwise hard decision of the LLRs restricted to
    the MRIS (bit 1 iff LLR < 0); flip cost is the sum of |LLR| over
    flipped positions.  Returns (patterns, flip_costs) with patterns in
    `ws.mris` (ascending index) order; fewer than l_max rows means the
    search space was exhausted.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.size != ws.n_cols:
        raise ValueError("LLR vector length does not match workspace")
    if l_max < 1:
        raise ValueError("l_max must be at least 1")
    K = ws.mris.size
    if l_max * max(K, 1) > (1 << 27):
        raise ValueError("l_max too large for candidate storage")
    C = ws.delta_eff
    if C > 64:
        raise NotImplementedError("more than 64 local constraints")

    baseline = (llrs[ws.mris] < 0).astype(np.uint8)
    costs_rank = np.abs(llrs)[ws.mris_by_rel]
    # Per-rank constraint signature and the target parities of the baseline.
    rank_cols = np.searchsorted(ws.mris, ws.mris_by_rel)
    sig = np.zeros(K, dtype=np.uint64)
    target = np.uint64(0)
    for c in range(C):
        row = ws._constraint_support[c]
        sig |= row[rank_cols].astype(np.uint64) << np.uint64(c)
        if int(row @ baseline.astype(np.int64)) & 1:
            target |= np.uint64(1) << np.uint64(c)
    if max_pops is None:
        max_pops = max(_POP_BUDGET_FLOOR, 16 * l_max * (1 << min(C, 20)))

    flips_rank, flip_costs, count = _enumerate_kernel(
        costs_rank, sig, target, K, l_max, max_pops
    )
    if count == 0:
        # Pop budget exhausted before any legal pattern surfaced; the
        # all-zero codeword is always legal, so fall back to it.
        patterns = np.zeros((1, K), dtype=np.uint8)
        return patterns, np.array([float(np.abs(llrs)[ws.mris][baseline == 1].sum())])
    flips = np.zeros((count, K), dtype=np.uint8)
    flips[:, rank_cols] = flips_rank[:count]
    patterns = baseline[None, :] ^ flips
    return patterns, flip_costs[:count]


def _reencode_batch(ws: LcosdWorkspace, patterns: np.ndarray) -> np.ndarray:
    full = np.zeros((patterns.shape[0], ws.n_cols), dtype=np.uint8)
    full[:, ws.mris] = patterns
    if ws.sys_pivots.size:
        sys_bits = (patterns.astype(np.int64) @ ws._sys_support.T.astype(np.int64)) & 1
        full[:, ws.sys_pivots] = sys_bits.astype(np.uint8)
    return full


def reencode(ws: LcosdWorkspace, mris_pattern) -> np.ndarray:
    """Extend a legal MRIS pattern to the full null-space vector.

    Each non-MRIS position, being the pivot of one systematic row, is the
    XOR of that row's MRIS-support bits under the pattern.
    """
    pattern = np.asarray(mris_pattern, dtype=np.uint8).reshape(1, -1)
    if pattern.shape[1] != ws.mris.size:
        raise ValueError("pattern length does not match MRIS size")
    viol = (pattern.astype(np.int64) @ ws._constraint_support.T.astype(np.int64)) & 1
    if viol.any():
        raise ValueError("pattern violates a local constraint")
    return _reencode_batch(ws, pattern)[0]


def lcosd_decode(Hp: BitMatrix, llrs, config: LcosdConfig) -> LcosdResult:
    """Full LCOSD pass: MRIS selection, constrained enumeration,
    re-encoding, and minimum-quality selection.

    Quality of a candidate c is sum_i c_i * llrs_i; ties go to the earlier
    candidate in enumeration order.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    ws = select_mris(Hp, np.abs(llrs), config.delta)
    patterns, flip_costs = enumerate_candidates(ws, llrs, config.l_max)
    vectors = _reencode_batch(ws, patterns)
    qualities = vectors.astype(np.float64) @ llrs
    best = int(np.argmin(qualities))
    cands = CandidateList(vectors, flip_costs, qualities)
    return LcosdResult(vectors[best], float(qualities[best]), len(cands), cands)
