"""Normalized min-sum belief propagation with syndrome soft information.

One scalar message per Tanner edge: the LLR of the binary commutation bit
between the qubit's error and the check's Pauli type at that qubit.  The
quaternary channel knowledge (the per-qubit X/Y/Z LLR tuple) is kept at the
variable nodes.  Every check additionally owns a degree-1 syndrome variable
whose fixed outgoing message is the syndrome prior, so the check parity
target is 0 over {incident commutation bits} + {true syndrome bit}; valid
assignments are exactly the null space of (H | I).

Variable-to-check messages are scaled by the normalization factor alpha;
check-to-variable messages and the syndrome prior are not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .channel import LLR_MAX, LlrState, PauliVector

# Pauli type codes on edges: 1 = X, 2 = Y, 3 = Z (matching channel codes).


class TannerGraph:
    """Edge-list form of the stabilizer Tanner graph.

    An edge (m, j) exists wherever row m of H acts with a non-identity
    Pauli on qubit j; edge_type holds that Pauli.  Immutable once built and
    shareable across decoder calls.
    """

    def __init__(self, n, m, edge_check, edge_qubit, edge_type):
        self.n = n
        self.m = m
        self.edge_check = edge_check
        self.edge_qubit = edge_qubit
        self.edge_type = edge_type
        order = np.lexsort((edge_qubit, edge_check))
        self.c_edges = order.astype(np.int64)
        self.c_ptr = np.searchsorted(edge_check[order], np.arange(m + 1)).astype(np.int64)
        order_q = np.lexsort((edge_check, edge_qubit))
        self.q_edges = order_q.astype(np.int64)
        self.q_ptr = np.searchsorted(edge_qubit[order_q], np.arange(n + 1)).astype(np.int64)
        self.max_check_degree = int(np.max(np.diff(self.c_ptr))) if m else 0
        self.max_qubit_degree = int(np.max(np.diff(self.q_ptr))) if n else 0

    @classmethod
    def from_code(cls, code) -> "TannerGraph":
        return cls.from_check_matrix(code.H, code.n)

    @classmethod
    def from_check_matrix(cls, H, n: int) -> "TannerGraph":
        dense = H.to_dense()
        m = H.rows
        checks, qubits, types = [], [], []
        for row in range(m):
            xpart = dense[row, :n]
            zpart = dense[row, n : 2 * n]
            for j in np.nonzero(xpart | zpart)[0]:
                checks.append(row)
                qubits.append(int(j))
                types.append(int(_TYPE_FROM_XZ[xpart[j] + 2 * zpart[j]]))
        return cls(
            n,
            m,
            np.asarray(checks, dtype=np.int64),
            np.asarray(qubits, dtype=np.int64),
            np.asarray(types, dtype=np.int64),
        )


_TYPE_FROM_XZ = np.array([0, 1, 3, 2], dtype=np.int64)  # (x + 2z) -> I,X,Z,Y


@dataclass(frozen=True)
class BpConfig:
    """Iteration limit, normalization factor, and message clamp."""

    t_max: int = 32
    alpha: float = 1.0
    llr_clamp: float = LLR_MAX

    def __post_init__(self):
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError("alpha must lie in (0, 1]")


@dataclass(frozen=True)
class BpOutput:
    """Posterior qubit LLR tuples, posterior true-syndrome LLRs, hard
    decisions, and the convergence flag (extended parity satisfied)."""

    lambda_tuples: np.ndarray  # (n, 3): LLR of X, Y, Z relative to I
    syndrome_llrs: np.ndarray  # (m,): LLR of the true syndrome bit
    hard_pauli: PauliVector
    hard_syndrome: np.ndarray
    converged: bool
    iterations_used: int


@njit(cache=True)
def _lse2(a, b):
    if a >= b:
        return a + math.log1p(math.exp(b - a))
    return b + math.log1p(math.exp(a - b))


@njit(cache=True)
def _var_msg(ch_x, ch_y, ch_z, target_type, msgs, types, count, alpha, clamp):
    # Log-beliefs relative to I: b(I) = 0; a message m on an edge of type t
    # penalizes the two Paulis that anticommute with t by -m.
    b_x = -ch_x
    b_y = -ch_y
    b_z = -ch_z
    for i in range(count):
        mv = msgs[i]
        t = types[i]
        if t != 1:
            b_x -= mv
        if t != 2:
            b_y -= mv
        if t != 3:
            b_z -= mv
    if target_type == 1:
        lc = _lse2(0.0, b_x)
        la = _lse2(b_y, b_z)
    elif target_type == 2:
        lc = _lse2(0.0, b_y)
        la = _lse2(b_x, b_z)
    else:
        lc = _lse2(0.0, b_z)
        la = _lse2(b_x, b_y)
    v = alpha * (lc - la)
    if v > clamp:
        return clamp
    if v < -clamp:
        return -clamp
    return v


@njit(cache=True)
def _check_update(msgs, out, count):
    # Min-sum extrinsic rule; sign(0) treated as +1.
    sign_all = 1.0
    min1 = np.inf
    min2 = np.inf
    imin = -1
    for i in range(count):
        x = msgs[i]
        if x < 0.0:
            sign_all = -sign_all
            a = -x
        else:
            a = x
        if a < min1:
            min2 = min1
            min1 = a
            imin = i
        elif a < min2:
            min2 = a
    for i in range(count):
        s = -sign_all if msgs[i] < 0.0 else sign_all
        out[i] = s * (min2 if i == imin else min1)


@njit(cache=True)
def _bp_kernel(
    n,
    m,
    c_ptr,
    c_edges,
    q_ptr,
    q_edges,
    edge_qubit,
    edge_type,
    ch,
    syn_prior,
    alpha,
    t_max,
    clamp,
):
    n_edges = edge_qubit.size
    msg_c2v = np.zeros(n_edges)
    msg_v2c = np.zeros(n_edges)
    extr_syn = np.zeros(m)
    lam = np.zeros((n, 3))
    post_syn = np.zeros(m)
    hard = np.zeros(n, dtype=np.uint8)
    hard_syn = np.zeros(m, dtype=np.uint8)

    max_cdeg = 0
    for mm in range(m):
        deg = c_ptr[mm + 1] - c_ptr[mm]
        if deg > max_cdeg:
            max_cdeg = deg
    max_qdeg = 0
    for j in range(n):
        deg = q_ptr[j + 1] - q_ptr[j]
        if deg > max_qdeg:
            max_qdeg = deg
    scratch = np.empty(max_cdeg + 1)
    out = np.empty(max_cdeg + 1)
    omsgs = np.empty(max(max_qdeg, 1))
    otypes = np.empty(max(max_qdeg, 1), dtype=np.int64)

    converged = False
    iters = t_max
    for it in range(1, t_max + 1):
        # (1) variable -> check, alpha applied
        for j in range(n):
            s0 = q_ptr[j]
            s1 = q_ptr[j + 1]
            for idx in range(s0, s1):
                e = q_edges[idx]
                count = 0
                for idx2 in range(s0, s1):
                    if idx2 == idx:
                        continue
                    e2 = q_edges[idx2]
                    omsgs[count] = msg_c2v[e2]
                    otypes[count] = edge_type[e2]
                    count += 1
                msg_v2c[e] = _var_msg(
                    ch[j, 0], ch[j, 1], ch[j, 2], edge_type[e], omsgs, otypes, count, alpha, clamp
                )
        # (2) check update over qubit messages + syndrome prior
        for mm in range(m):
            s0 = c_ptr[mm]
            deg = c_ptr[mm + 1] - s0
            for t in range(deg):
                scratch[t] = msg_v2c[c_edges[s0 + t]]
            scratch[deg] = syn_prior[mm]
            _check_update(scratch, out, deg + 1)
            for t in range(deg):
                v = out[t]
                if v > clamp:
                    v = clamp
                elif v < -clamp:
                    v = -clamp
                msg_c2v[c_edges[s0 + t]] = v
            v = out[deg]
            if v > clamp:
                v = clamp
            elif v < -clamp:
                v = -clamp
            extr_syn[mm] = v
        # (3) posteriors from all incident checks
        for j in range(n):
            lam_x = ch[j, 0]
            lam_y = ch[j, 1]
            lam_z = ch[j, 2]
            for idx in range(q_ptr[j], q_ptr[j + 1]):
                e = q_edges[idx]
                mv = msg_c2v[e]
                t = edge_type[e]
                if t != 1:
                    lam_x += mv
                if t != 2:
                    lam_y += mv
                if t != 3:
                    lam_z += mv
            lam[j, 0] = lam_x
            lam[j, 1] = lam_y
            lam[j, 2] = lam_z
            # (4) hard decision: argmax posterior; ties prefer I, X, Y, Z
            best = 0.0
            w = 0
            if lam_x < best:
                best = lam_x
                w = 1
            if lam_y < best:
                best = lam_y
                w = 2
            if lam_z < best:
                best = lam_z
                w = 3
            hard[j] = w
        for mm in range(m):
            post_syn[mm] = syn_prior[mm] + extr_syn[mm]
            hard_syn[mm] = 1 if post_syn[mm] < 0.0 else 0
        # (5) early stop on the extended parity relation H (.) e = sigma
        ok = True
        for mm in range(m):
            par = 0
            for idx in range(c_ptr[mm], c_ptr[mm + 1]):
                e = c_edges[idx]
                w = hard[edge_qubit[e]]
                if w != 0 and w != edge_type[e]:
                    par ^= 1
            if par != hard_syn[mm]:
                ok = False
                break
        if ok:
            converged = True
            iters = it
            break
    return lam, post_syn, hard, hard_syn, converged, iters


def check_node_update(incoming) -> np.ndarray:
    """Min-sum extrinsic update: out_i = prod_{j!=i} sign(in_j) * min_{j!=i} |in_j|."""
    msgs = np.asarray(incoming, dtype=np.float64)
    if msgs.size < 2:
        raise ValueError("check update needs at least two incident variables")
    out = np.empty_like(msgs)
    _check_update(msgs, out, msgs.size)
    return out


def variable_to_check(
    channel_tuple,
    target_type: int,
    other_msgs,
    other_types,
    alpha: float = 1.0,
    clamp: float = LLR_MAX,
) -> float:
    """Extrinsic commutation-bit LLR from a qubit toward one check.

    Args:
        channel_tuple: (X, Y, Z) channel LLRs relative to I.
        target_type: Pauli code (1, 2, 3) of the target check at this qubit.
        other_msgs / other_types: incoming messages and Pauli codes of the
            remaining incident checks.
        alpha: normalization factor applied to the result.
    """
    ch = np.asarray(channel_tuple, dtype=np.float64)
    msgs = np.asarray(other_msgs, dtype=np.float64)
    types = np.asarray(other_types, dtype=np.int64)
    if target_type not in (1, 2, 3):
        raise ValueError("target_type must be 1 (X), 2 (Y) or 3 (Z)")
    return float(
        _var_msg(ch[0], ch[1], ch[2], target_type, msgs, types, msgs.size, alpha, clamp)
    )


def bp_decode(graph: TannerGraph, init: LlrState, config: BpConfig) -> BpOutput:
    """Flooding-schedule NMS decode; stops early when the hard decisions
    satisfy the extended parity relation, else runs t_max iterations."""
    lam, post_syn, hard, hard_syn, converged, iters = _bp_kernel(
        graph.n,
        graph.m,
        graph.c_ptr,
        graph.c_edges,
        graph.q_ptr,
        graph.q_edges,
        graph.edge_qubit,
        graph.edge_type,
        init.channel_tuples,
        init.syndrome_llrs,
        config.alpha,
        config.t_max,
        config.llr_clamp,
    )
    return BpOutput(
        lam,
        post_syn,
        PauliVector.from_codes(hard),
        hard_syn,
        bool(converged),
        int(iters),
    )
