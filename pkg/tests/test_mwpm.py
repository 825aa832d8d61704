import numpy as np
import pytest

from bplcosd.channel import PauliVector
from bplcosd.codes import build_surface_code
from bplcosd.gf2 import symplectic_syndrome
from bplcosd.mwpm import (
    boundary_distance,
    defect_distance,
    defects_from_syndrome,
    exact_matching,
    mwpm_decode,
)
from bplcosd.pipeline import is_logical_error


def test_defect_distance_examples():
    assert defect_distance((0, 1), (0, 1)) == 0
    assert defect_distance((0, 1), (0, 3)) == 1
    assert defect_distance((0, 1), (2, 3)) == 2
    with pytest.raises(ValueError):
        defect_distance((0, 1), (1, 0))  # Z-check vs X-check


def test_boundary_distance_examples():
    assert boundary_distance((0, 1), 5) == 1
    assert boundary_distance((0, 7), 5) == 1
    assert boundary_distance((4, 5), 5) == 2
    assert boundary_distance((1, 0), 5) == 1  # X-check, top boundary
    assert boundary_distance((5, 4), 5) == 2  # X-check mid-lattice


def brute_force_matching(pair_w, bnd_w):
    n = len(bnd_w)
    best = np.inf

    def recurse(remaining, acc):
        nonlocal best
        if not remaining:
            best = min(best, acc)
            return
        i = remaining[0]
        rest = remaining[1:]
        recurse(rest, acc + bnd_w[i])
        for k, j in enumerate(rest):
            recurse(rest[:k] + rest[k + 1 :], acc + pair_w[i][j])

    recurse(list(range(n)), 0.0)
    return best


def test_exact_matching_trivial_cases():
    assert exact_matching(np.zeros((0, 0)), np.zeros(0)).total_weight == 0.0
    m = exact_matching([[0.0, 1.0], [1.0, 0.0]], [3.0, 3.0])
    assert m.total_weight == 1.0
    assert m.pairs == ((0, 1),)
    m = exact_matching([[0.0, 5.0], [5.0, 0.0]], [1.0, 1.0])
    assert m.total_weight == 2.0
    assert all(j is None for _, j in m.pairs)


def test_exact_matching_against_brute_force():
    rng = np.random.default_rng(30)
    for _ in range(40):
        n = int(rng.integers(1, 7))
        pw = rng.integers(1, 9, size=(n, n)).astype(float)
        pw = (pw + pw.T) / 2
        np.fill_diagonal(pw, 0.0)
        bw = rng.integers(1, 9, size=n).astype(float)
        m = exact_matching(pw, bw)
        assert m.total_weight == pytest.approx(brute_force_matching(pw.tolist(), bw.tolist()))
        # every defect appears exactly once
        seen = [i for pair in m.pairs for i in pair if i is not None]
        assert sorted(seen) == list(range(n))


def test_exact_matching_defect_cap():
    n = 21
    with pytest.raises(ValueError):
        exact_matching(np.zeros((n, n)), np.zeros(n))


def test_mwpm_zero_syndrome():
    code = build_surface_code(5)
    assert mwpm_decode(code, np.zeros(40, dtype=np.uint8)).weight == 0


def test_mwpm_correction_reproduces_syndrome():
    # perfect matching annihilates every defect, so the correction's
    # syndrome equals the observed syndrome even for odd defect counts
    code = build_surface_code(5)
    rng = np.random.default_rng(31)
    for _ in range(100):
        z = (rng.random(40) < 0.15).astype(np.uint8)
        e_hat = mwpm_decode(code, z)
        assert np.array_equal(symplectic_syndrome(code.H, e_hat), z)


def test_mwpm_single_x_errors_d5():
    code = build_surface_code(5)
    for j in range(code.n):
        e = PauliVector.single(code.n, j, 1)
        z = symplectic_syndrome(code.H, e)
        e_hat = mwpm_decode(code, z)
        assert not is_logical_error(code, e, e_hat)


def test_mwpm_weight_one_exhaustive_d3():
    code = build_surface_code(3)
    for j in range(code.n):
        for pauli in (1, 2, 3):
            e = PauliVector.single(code.n, j, pauli)
            z = symplectic_syndrome(code.H, e)
            assert not is_logical_error(code, e, mwpm_decode(code, z))


def test_mwpm_weight_two_sampled_d5():
    code = build_surface_code(5)
    rng = np.random.default_rng(32)
    for _ in range(200):
        qubits = rng.choice(code.n, size=2, replace=False)
        codes = np.zeros(code.n, dtype=np.uint8)
        codes[qubits] = rng.integers(1, 4, size=2)
        e = PauliVector.from_codes(codes)
        z = symplectic_syndrome(code.H, e)
        assert not is_logical_error(code, e, mwpm_decode(code, z))


def test_defects_from_syndrome_partition():
    code = build_surface_code(3)
    geo = code.geometry
    z = np.zeros(12, dtype=np.uint8)
    z[geo.x_check_at(1, 2)] = 1
    z[geo.z_check_at(2, 1)] = 1
    d = defects_from_syndrome(code, z)
    assert d.x_defects == ((1, 2),)
    assert d.z_defects == ((2, 1),)


def test_mwpm_requires_geometry():
    from bplcosd.codes import five_qubit_code

    with pytest.raises(ValueError):
        mwpm_decode(five_qubit_code(), np.zeros(4, dtype=np.uint8))


def test_matching_weight_bounded_by_all_boundary():
    code = build_surface_code(5)
    rng = np.random.default_rng(33)
    geo = code.geometry
    for _ in range(50):
        z = (rng.random(40) < 0.2).astype(np.uint8)
        defects = defects_from_syndrome(code, z)
        for cells in (defects.x_defects, defects.z_defects):
            n = len(cells)
            if n == 0:
                continue
            pw = np.array(
                [[defect_distance(a, b) if a != b else 0 for b in cells] for a in cells],
                dtype=float,
            )
            bw = np.array([boundary_distance(c, geo.d) for c in cells], dtype=float)
            m = exact_matching(pw, bw)
            assert m.total_weight <= bw.sum() + 1e-9
