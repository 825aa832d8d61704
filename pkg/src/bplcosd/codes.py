"""Stabilizer code construction: planar surface codes and the [[5,1,3]] code.

The surface code lives on a checkerboard cell grid of size (2d-1) x (2d-1):
cells with r + c even carry qubits, cells with r odd / c even carry X-type
checks (faces), and cells with r even / c odd carry Z-type checks
(vertices).  Each check acts with its Pauli type on the orthogonally
adjacent in-grid qubit cells, which reproduces the usual planar layout with
weight-3 checks along the boundary and n = 2d^2 - 2d + 1 qubits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import PauliVector
from .gf2 import BitMatrix


@dataclass(frozen=True)
class SurfaceGeometry:
    """Cell-grid geometry of the distance-d planar surface code."""

    d: int

    @property
    def size(self) -> int:
        """Cells per side of the grid."""
        return 2 * self.d - 1

    @property
    def num_qubits(self) -> int:
        return 2 * self.d * self.d - 2 * self.d + 1

    @property
    def num_x_checks(self) -> int:
        return self.d * (self.d - 1)

    @property
    def num_z_checks(self) -> int:
        return self.d * (self.d - 1)

    def in_grid(self, r: int, c: int) -> bool:
        return 0 <= r < self.size and 0 <= c < self.size

    def is_qubit_cell(self, r: int, c: int) -> bool:
        return self.in_grid(r, c) and (r + c) % 2 == 0

    def is_x_check_cell(self, r: int, c: int) -> bool:
        return self.in_grid(r, c) and r % 2 == 1 and c % 2 == 0

    def is_z_check_cell(self, r: int, c: int) -> bool:
        return self.in_grid(r, c) and r % 2 == 0 and c % 2 == 1

    def qubit_at(self, r: int, c: int) -> int:
        """Qubit index of cell (r, c); row-major over qubit cells."""
        if not self.is_qubit_cell(r, c):
            raise ValueError(f"({r}, {c}) is not a qubit cell")
        per_pair = 2 * self.d - 1  # qubits in one (even, odd) row pair
        base = (r // 2) * per_pair + (self.d if r % 2 else 0)
        return base + c // 2

    def x_check_at(self, r: int, c: int) -> int:
        """H row index of the X-check at cell (r, c)."""
        if not self.is_x_check_cell(r, c):
            raise ValueError(f"({r}, {c}) is not an X-check cell")
        return ((r - 1) // 2) * self.d + c // 2

    def z_check_at(self, r: int, c: int) -> int:
        """H row index of the Z-check at cell (r, c); Z rows follow X rows."""
        if not self.is_z_check_cell(r, c):
            raise ValueError(f"({r}, {c}) is not a Z-check cell")
        return self.num_x_checks + (r // 2) * (self.d - 1) + (c - 1) // 2

    def qubit_cells(self) -> list[tuple[int, int]]:
        s = self.size
        return [(r, c) for r in range(s) for c in range(s) if (r + c) % 2 == 0]

    def x_check_cells(self) -> list[tuple[int, int]]:
        s = self.size
        return [(r, c) for r in range(1, s, 2) for c in range(0, s, 2)]

    def z_check_cells(self) -> list[tuple[int, int]]:
        s = self.size
        return [(r, c) for r in range(0, s, 2) for c in range(1, s, 2)]

    def check_neighbors(self, r: int, c: int) -> list[tuple[int, int]]:
        """In-grid qubit cells orthogonally adjacent to a check cell."""
        out = []
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if self.is_qubit_cell(rr, cc):
                out.append((rr, cc))
        return out


@dataclass(frozen=True)
class StabilizerCode:
    """An [[n, k]] stabilizer code given by its binary symplectic check matrix.

    H is (n - k) x 2n in (X-part | Z-part) column convention.  Logical
    operators are fixed representatives; equivalence checks go through
    symplectic products, so any representative works.
    """

    n: int
    k: int
    num_checks: int
    H: BitMatrix
    logical_x: tuple[PauliVector, ...]
    logical_z: tuple[PauliVector, ...]
    geometry: SurfaceGeometry | None = None


def build_surface_code(d: int) -> StabilizerCode:
    """Distance-d planar surface code, [[2d^2 - 2d + 1, 1, d]].

    X-check rows come first (row-major over cells), then Z-check rows.
    The logical Z is Z on every qubit in grid column 0; the logical X is
    X on every qubit in grid row 0.
    """
    if d < 2:
        raise ValueError("distance must be at least 2")
    geo = SurfaceGeometry(d)
    n = geo.num_qubits
    m = geo.num_x_checks + geo.num_z_checks
    H = BitMatrix(m, 2 * n)
    for r, c in geo.x_check_cells():
        row = geo.x_check_at(r, c)
        for rr, cc in geo.check_neighbors(r, c):
            H.set(row, geo.qubit_at(rr, cc), 1)
    for r, c in geo.z_check_cells():
        row = geo.z_check_at(r, c)
        for rr, cc in geo.check_neighbors(r, c):
            H.set(row, n + geo.qubit_at(rr, cc), 1)

    lx = np.zeros(n, dtype=np.uint8)
    for c in range(0, geo.size, 2):
        lx[geo.qubit_at(0, c)] = 1
    lz = np.zeros(n, dtype=np.uint8)
    for r in range(0, geo.size, 2):
        lz[geo.qubit_at(r, 0)] = 1
    logical_x = PauliVector(lx, np.zeros(n, dtype=np.uint8))
    logical_z = PauliVector(np.zeros(n, dtype=np.uint8), lz)
    return StabilizerCode(n, 1, m, H, (logical_x,), (logical_z,), geo)


_FIVE_QUBIT_ROWS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")


def five_qubit_code() -> StabilizerCode:
    """The [[5, 1, 3]] perfect code; fixed test-vector source."""
    n = 5
    H = BitMatrix(4, 2 * n)
    for row, paulis in enumerate(_FIVE_QUBIT_ROWS):
        pv = PauliVector.from_string(paulis)
        for j in range(n):
            if pv.x[j]:
                H.set(row, j, 1)
            if pv.z[j]:
                H.set(row, n + j, 1)
    logical_x = PauliVector.from_string("XXXXX")
    logical_z = PauliVector.from_string("ZZZZZ")
    return StabilizerCode(n, 1, 4, H, (logical_x,), (logical_z,), None)


def check_pauli(code: StabilizerCode, row: int) -> PauliVector:
    """Row `row` of H interpreted as a Pauli operator."""
    bits = code.H.row_bits(row)
    return PauliVector(bits[: code.n], bits[code.n : 2 * code.n])
