import math
from types import SimpleNamespace

import numpy as np
import pytest

from bplcosd.channel import (
    LLR_MAX,
    NoiseModel,
    PauliVector,
    init_llrs,
    measure_syndrome,
    sample_error,
    trial_rng,
)
from bplcosd.codes import five_qubit_code
from bplcosd.gf2 import symplectic_syndrome


def test_pauli_vector_basics():
    e = PauliVector.from_string("IXYZ")
    assert e.to_string() == "IXYZ"
    assert e.x.tolist() == [0, 1, 1, 0]
    assert e.z.tolist() == [0, 0, 1, 1]
    assert e.weight == 3
    assert (e * e) == PauliVector.identity(4)
    assert PauliVector.from_string("XX").symplectic_product(PauliVector.from_string("ZI")) == 1


def test_noise_model_validation():
    NoiseModel(0.0, 1.0)
    with pytest.raises(ValueError):
        NoiseModel(-0.1, 0.5)
    with pytest.raises(ValueError):
        NoiseModel(0.5, 1.5)


def test_sample_error_p_zero():
    rng = trial_rng(0, 0)
    fake = SimpleNamespace(n=200)
    for _ in range(10):
        assert sample_error(fake, 0.0, rng).weight == 0


def test_sample_error_p_one_ratios():
    rng = trial_rng(1, 0)
    fake = SimpleNamespace(n=100_000)
    e = sample_error(fake, 1.0, rng)
    codes = e.codes
    assert not (codes == 0).any()
    n = fake.n
    sigma = 3.0 * math.sqrt((1 / 3) * (2 / 3) * n)
    for pauli in (1, 2, 3):
        assert abs(int((codes == pauli).sum()) - n / 3) < sigma


def test_sample_error_fraction():
    p = 0.1
    draws = 100_000 // 41
    rng = trial_rng(2, 0)
    fake = SimpleNamespace(n=41)
    non_i = sum(sample_error(fake, p, rng).weight for _ in range(draws))
    total = draws * 41
    sigma = 3.0 * math.sqrt(p * (1 - p) * total)
    assert abs(non_i - p * total) < sigma


def test_same_seed_reproducible():
    code = five_qubit_code()
    e1 = sample_error(code, 0.3, trial_rng(7, 3, 11))
    e2 = sample_error(code, 0.3, trial_rng(7, 3, 11))
    assert e1 == e2
    s1 = measure_syndrome(code, e1, 0.2, trial_rng(7, 3, 12))
    s2 = measure_syndrome(code, e2, 0.2, trial_rng(7, 3, 12))
    assert np.array_equal(s1.z, s2.z)


def test_measure_syndrome_q_extremes():
    code = five_qubit_code()
    e = PauliVector.from_string("IYIII")
    clean = measure_syndrome(code, e, 0.0, trial_rng(0, 1))
    assert np.array_equal(clean.z, clean.sigma_true)
    assert np.array_equal(clean.z, [1, 1, 0, 1])
    flipped = measure_syndrome(code, e, 1.0, trial_rng(0, 2))
    assert np.array_equal(flipped.z, 1 - flipped.sigma_true)


def test_measure_syndrome_matches_symplectic():
    code = five_qubit_code()
    rng = trial_rng(9, 0)
    for _ in range(10_000):
        e = sample_error(code, 0.3, rng)
        sample = measure_syndrome(code, e, 0.0, rng)
        assert np.array_equal(sample.z, symplectic_syndrome(code.H, e))


def test_init_llr_values():
    code = five_qubit_code()
    z = np.zeros(4, dtype=np.uint8)
    st = init_llrs(code, NoiseModel(0.75, 0.1), z)
    assert np.allclose(st.channel_tuples, 0.0)

    st = init_llrs(code, NoiseModel(0.03, 0.1), z)
    assert np.allclose(st.channel_tuples, math.log(0.97 / 0.01))
    assert abs(st.channel_tuples[0, 0] - 4.5747) < 1e-4

    z1 = np.array([0, 1, 0, 0], dtype=np.uint8)
    st = init_llrs(code, NoiseModel(0.03, 1e-5), z1)
    assert abs(st.syndrome_llrs[1] + math.log(99999)) < 1e-9
    assert abs(st.syndrome_llrs[1] + 11.5129) < 1e-4


def test_init_llr_clamping_and_signs():
    code = five_qubit_code()
    z = np.array([0, 1, 1, 0], dtype=np.uint8)
    st = init_llrs(code, NoiseModel(0.0, 0.0), z)
    assert np.all(np.abs(st.channel_tuples) <= LLR_MAX)
    assert np.all(np.abs(st.syndrome_llrs) <= LLR_MAX)
    st = init_llrs(code, NoiseModel(1.0, 1.0), z)
    assert np.all(st.channel_tuples == -LLR_MAX)
    # for q < 1/2 the sign of every syndrome LLR encodes the observed bit
    st = init_llrs(code, NoiseModel(0.1, 0.01), z)
    assert np.all((st.syndrome_llrs > 0) == (z == 0))
