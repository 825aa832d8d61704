"""Minimum-weight perfect matching baseline on the 2-D surface-code lattice.

Trusts the observed syndrome: Z-type defects are paired (with each other or
with the left/right boundary) to place X corrections, X-type defects pair
across the top/bottom boundaries to place Z corrections.  Matching is exact
via dynamic programming over defect subsets, which is plenty at desk scale
(at most 20 defects per check type for d = 5).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .channel import PauliVector
from .codes import StabilizerCode, SurfaceGeometry

D_MAX = 20


@dataclass(frozen=True)
class DefectSet:
    """Check cells with observed syndrome 1, split by check type."""

    x_defects: tuple[tuple[int, int], ...]
    z_defects: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Matching:
    """Pairs of defect indices, or (i, None) for a boundary match."""

    pairs: tuple[tuple[int, int | None], ...]
    total_weight: float


def _check_kind(cell: tuple[int, int]) -> str:
    r, c = cell
    if r % 2 == 0 and c % 2 == 1:
        return "Z"
    if r % 2 == 1 and c % 2 == 0:
        return "X"
    raise ValueError(f"{cell} is not a check cell")


def defect_distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Matching weight between two same-type defects: half the Manhattan
    cell distance (one physical error moves a defect by 2 cells)."""
    if _check_kind(a) != _check_kind(b):
        raise ValueError("defects have different check types")
    return (abs(a[0] - b[0]) + abs(a[1] - b[1])) // 2


def boundary_distance(cell: tuple[int, int], d: int) -> int:
    """Weight of matching a defect to its nearest boundary.

    Z-checks terminate X-error chains on the left/right boundary; X-checks
    terminate Z-error chains on the top/bottom boundary.
    """
    span = 2 * d - 1
    r, c = cell
    if _check_kind(cell) == "Z":
        return min((c + 1) // 2, (span - c) // 2)
    return min((r + 1) // 2, (span - r) // 2)


@njit(cache=True)
def _match_dp(pair_w, bnd_w, n_defects):
    full = 1 << n_defects
    best = np.full(full, np.inf)
    choice = np.full(full, -2, dtype=np.int8)
    best[0] = 0.0
    for mask in range(1, full):
        i = 0
        while not (mask >> i) & 1:
            i += 1
        rest = mask ^ (1 << i)
        b = bnd_w[i] + best[rest]
        ch = -1
        mm = rest
        while mm:
            j = 0
            while not (mm >> j) & 1:
                j += 1
            mm &= mm - 1
            cand = pair_w[i, j] + best[mask ^ (1 << i) ^ (1 << j)]
            if cand < b:
                b = cand
                ch = j
        best[mask] = b
        choice[mask] = ch
    return best[full - 1], choice


def exact_matching(pair_weights, boundary_weights) -> Matching:
    """Globally minimum-cost matching of defects to each other or the boundary.

    Args:
        pair_weights: symmetric (D, D) weight matrix.
        boundary_weights: length-D weights for boundary matches (the
            boundary is reusable).

    Subset-DP, exact for D <= D_MAX defects.
    """
    bnd = np.asarray(boundary_weights, dtype=np.float64)
    n = bnd.size
    if n == 0:
        return Matching((), 0.0)
    if n > D_MAX:
        raise ValueError(f"{n} defects exceeds the exact-matching limit of {D_MAX}")
    pw = np.asarray(pair_weights, dtype=np.float64).reshape(n, n)
    total, choice = _match_dp(pw, bnd, n)
    pairs: list[tuple[int, int | None]] = []
    mask = (1 << n) - 1
    while mask:
        i = (mask & -mask).bit_length() - 1
        j = int(choice[mask])
        if j < 0:
            pairs.append((i, None))
            mask ^= 1 << i
        else:
            pairs.append((i, j))
            mask ^= (1 << i) | (1 << j)
    return Matching(tuple(pairs), float(total))


def _pair_path_qubits(geo: SurfaceGeometry, a, b) -> list[int]:
    """Qubits on the row-first lattice path between two same-type defects."""
    (r1, c1), (r2, c2) = a, b
    qubits = []
    step = 2 if r2 > r1 else -2
    for rr in range(r1, r2, step):
        qubits.append(geo.qubit_at(rr + step // 2, c1))
    step = 2 if c2 > c1 else -2
    for cc in range(c1, c2, step):
        qubits.append(geo.qubit_at(r2, cc + step // 2))
    return qubits


def _boundary_path_qubits(geo: SurfaceGeometry, cell) -> list[int]:
    """Qubits on the shortest path to the defect's boundary (ties: low side)."""
    span = geo.size
    r, c = cell
    if _check_kind(cell) == "Z":
        if (c + 1) // 2 <= (span - c) // 2:
            return [geo.qubit_at(r, cc) for cc in range(c - 1, -1, -2)]
        return [geo.qubit_at(r, cc) for cc in range(c + 1, span, 2)]
    if (r + 1) // 2 <= (span - r) // 2:
        return [geo.qubit_at(rr, c) for rr in range(r - 1, -1, -2)]
    return [geo.qubit_at(rr, c) for rr in range(r + 1, span, 2)]


def defects_from_syndrome(code: StabilizerCode, z) -> DefectSet:
    """Observed-syndrome-1 check cells, split by type."""
    geo = code.geometry
    if geo is None:
        raise ValueError("code has no lattice geometry")
    z = np.asarray(z, dtype=np.uint8)
    x_def = tuple(cell for cell in geo.x_check_cells() if z[geo.x_check_at(*cell)])
    z_def = tuple(cell for cell in geo.z_check_cells() if z[geo.z_check_at(*cell)])
    return DefectSet(x_def, z_def)


def mwpm_decode(code: StabilizerCode, z) -> PauliVector:
    """Correction whose syndrome reproduces z exactly.

    Z-type and X-type defects are matched independently; each matched pair
    or boundary match contributes the corresponding Pauli along a row-first
    lattice path.  The implied syndrome estimate is z itself.
    """
    geo = code.geometry
    if geo is None:
        raise ValueError("code has no lattice geometry")
    defects = defects_from_syndrome(code, z)
    corr_x = np.zeros(code.n, dtype=np.uint8)
    corr_z = np.zeros(code.n, dtype=np.uint8)
    for cells, target in ((defects.z_defects, corr_x), (defects.x_defects, corr_z)):
        n_def = len(cells)
        if n_def == 0:
            continue
        pw = np.zeros((n_def, n_def))
        for i in range(n_def):
            for j in range(i + 1, n_def):
                pw[i, j] = pw[j, i] = defect_distance(cells[i], cells[j])
        bw = np.array([boundary_distance(cell, geo.d) for cell in cells], dtype=np.float64)
        matching = exact_matching(pw, bw)
        for i, j in matching.pairs:
            if j is None:
                path = _boundary_path_qubits(geo, cells[i])
            else:
                path = _pair_path_qubits(geo, cells[i], cells[j])
            for q in path:
                target[q] ^= 1
    return PauliVector(corr_x, corr_z)
