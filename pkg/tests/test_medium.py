import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy.linalg import expm

from scripts.common.matrices import det2, expm2_series, frobenius_distance
from scripts.common.utils import ValidationError
from scripts.optics.elements import rotation, squeeze_45
from scripts.optics.medium import (
    Elliptic,
    Hyperbolic,
    MediumParams,
    Parabolic,
    classify,
    convergence_slope,
    convergence_study,
    decompose_attenuation,
    generator,
    regime_generator,
    transfer_closed,
    transfer_decomposed,
    transfer_first_order,
    transfer_naive,
    transfer_product,
)

ELLIPTIC = MediumParams(gamma=2.0, mu1=0.1, mu2=0.3)
HYPERBOLIC = MediumParams(gamma=0.5, mu1=0.0, mu2=4.0)


def _exact(params, z):
    return math.exp(-params.lam * z) * expm(generator(params.gamma, params.mu) * z)


def test_decompose_attenuation():
    lam, mu = decompose_attenuation(0.1, 0.3)
    assert lam == pytest.approx(0.2)
    assert mu == pytest.approx(0.1)
    params = MediumParams.from_decomposed(1.0, 0.0, 1.0)
    assert (params.mu1, params.mu2) == (-1.0, 1.0)
    assert params.has_gain
    assert not ELLIPTIC.has_gain


def test_params_reject_non_finite():
    with pytest.raises(ValidationError, match='gamma'):
        MediumParams(gamma=float('nan'), mu1=0.0, mu2=0.0)


def test_classify_elliptic():
    regime = classify(2.0, 0.1)
    assert isinstance(regime, Elliptic)
    assert regime.k == pytest.approx(math.sqrt(3.99))
    assert math.exp(2 * regime.eta) == pytest.approx(math.sqrt(1.9 / 2.1))
    assert regime.orientation == 1


def test_classify_hyperbolic():
    regime = classify(0.5, 2.0)
    assert isinstance(regime, Hyperbolic)
    assert regime.k == pytest.approx(math.sqrt(3.75))
    assert regime.orientation == 1
    assert classify(0.5, -2.0).orientation == -1


@pytest.mark.parametrize('gamma, mu', [(1.0, 1.0), (1.0, -1.0), (0.0, 0.0), (3.0, 3.0 * (1 + 1e-12))])
def test_classify_parabolic(gamma, mu):
    regime = classify(gamma, mu)
    assert isinstance(regime, Parabolic)
    assert regime.k == 0.0
    assert regime.eta is None


@pytest.mark.parametrize('gamma, mu', [(2.0, 0.1), (-2.0, 0.1), (0.5, 2.0), (0.5, -2.0), (1.0, 1.0)])
def test_regime_generator_rebuilds_generator(gamma, mu):
    assert_allclose(regime_generator(classify(gamma, mu)), generator(gamma, mu), atol=1e-12)


def test_transfer_at_zero_length_is_identity():
    for params in (ELLIPTIC, HYPERBOLIC, MediumParams(1.0, -1.0, 1.0)):
        assert_array_equal(transfer_closed(params, 0.0).matrix, np.eye(2))


def test_parabolic_shear():
    result = transfer_closed(MediumParams.from_decomposed(1.0, 0.0, 1.0), 0.5)
    assert_array_equal(result.matrix, [[1.0, 0.0], [1.0, 1.0]])
    assert result.regime.name == 'parabolic'
    assert result.lambda_factor == 1.0


@pytest.mark.parametrize('params', [ELLIPTIC, HYPERBOLIC, MediumParams(-1.5, 0.7, 0.2)])
@pytest.mark.parametrize('z', [0.1, 1.0, 5.0])
def test_closed_form_matches_exponential(params, z):
    closed = transfer_closed(params, z).matrix
    assert_allclose(closed, _exact(params, z), rtol=1e-10, atol=1e-12)
    series = math.exp(-params.lam * z) * expm2_series(generator(params.gamma, params.mu) * z)
    assert_allclose(closed, series, rtol=1e-10, atol=1e-12)


def test_closed_form_is_continuous_across_boundary():
    matrices = [
        transfer_closed(MediumParams.from_decomposed(1.0, 0.0, mu), 1.0).matrix
        for mu in (1.0 - 1e-6, 1.0, 1.0 + 1e-6)
    ]
    assert all(np.all(np.isfinite(m)) for m in matrices)
    assert frobenius_distance(matrices[0], matrices[1]) < 1e-5
    assert frobenius_distance(matrices[1], matrices[2]) < 1e-5


def test_lossless_transfer_is_unimodular():
    params = MediumParams.from_decomposed(2.0, 0.0, 0.7)
    assert det2(transfer_closed(params, 3.0).matrix) == pytest.approx(1.0, abs=1e-12)
    assert det2(transfer_closed(ELLIPTIC, 3.0).unimodular) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize('z', [0.1, 1.0])
def test_product_converges_to_closed_form(z):
    closed = transfer_closed(ELLIPTIC, z).matrix
    assert frobenius_distance(transfer_product(ELLIPTIC, z, 100000), closed) <= 1e-4


def test_product_at_long_length():
    closed = transfer_closed(ELLIPTIC, 5.0).matrix
    distance = frobenius_distance(transfer_product(ELLIPTIC, 5.0, 1000000), closed)
    assert distance <= 1e-3 * np.linalg.norm(closed)


def test_first_order_product_converges():
    closed = transfer_closed(ELLIPTIC, 1.0).matrix
    assert frobenius_distance(transfer_first_order(ELLIPTIC, 1.0, 100000), closed) <= 1e-4


def test_naive_product_is_visibly_wrong():
    closed = transfer_closed(ELLIPTIC, 1.0).matrix
    naive_distance = frobenius_distance(transfer_naive(ELLIPTIC, 1.0), closed)
    assert naive_distance > 1e-2
    assert naive_distance > 100 * frobenius_distance(transfer_product(ELLIPTIC, 1.0, 100000), closed)


def test_convergence_is_first_order():
    steps = [100, 1000, 10000, 100000, 1000000]
    study = convergence_study(ELLIPTIC, 1.0, steps)
    assert [row['n'] for row in study] == steps
    assert study[2]['distance'] <= 1e-3
    assert -1.2 <= convergence_slope(study) <= -0.8


@pytest.mark.parametrize('params', [ELLIPTIC, HYPERBOLIC, MediumParams(-1.5, 0.7, 0.2)])
def test_decomposed_matches_closed_form(params):
    decomposed = transfer_decomposed(params, 1.3)
    closed = transfer_closed(params, 1.3)
    assert decomposed.regime == closed.regime
    assert_allclose(decomposed.matrix, closed.matrix, rtol=1e-10, atol=1e-12)


def test_decomposed_parabolic_is_shear():
    params = MediumParams.from_decomposed(1.0, 0.0, 1.0)
    assert_array_equal(transfer_decomposed(params, 0.5).matrix, [[1.0, 0.0], [1.0, 1.0]])


@pytest.mark.parametrize('call', [
    lambda: transfer_closed(ELLIPTIC, -1.0),
    lambda: transfer_closed(ELLIPTIC, float('inf')),
    lambda: transfer_product(ELLIPTIC, 1.0, 0),
    lambda: transfer_first_order(ELLIPTIC, 1.0, 0),
    lambda: classify(1.0, 0.5, rel_tol=-1.0),
])
def test_invalid_input_is_rejected(call):
    with pytest.raises(ValidationError):
        call()


GRID = [
    (gamma, mu, z)
    for gamma in (0.0, 0.5, 1.0, 2.0)
    for mu in (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    for z in (0.1, 1.0, 5.0)
]


@pytest.mark.parametrize('gamma, mu, z', GRID)
def test_unimodular_after_stripping_loss(gamma, mu, z):
    result = transfer_closed(MediumParams.from_decomposed(gamma, 0.3, mu), z)
    scale = max(1.0, float(np.linalg.norm(result.unimodular)) ** 2)
    assert abs(det2(result.unimodular) - 1.0) <= 1e-12 * scale


@pytest.mark.parametrize('gamma, mu, z', GRID)
def test_closed_form_matches_series_on_grid(gamma, mu, z):
    params = MediumParams.from_decomposed(gamma, 0.3, mu)
    closed = transfer_closed(params, z).matrix
    series = math.exp(-params.lam * z) * expm2_series(generator(params.gamma, params.mu) * z)
    assert frobenius_distance(closed, series) <= 1e-12 * max(1.0, float(np.linalg.norm(closed)))


@pytest.mark.parametrize('gamma', [0.5, 1.0, 2.0])
@pytest.mark.parametrize('z', [0.1, 1.0, 5.0])
def test_parabolic_is_exact_shear(gamma, z):
    matrix = transfer_closed(MediumParams.from_decomposed(gamma, 0.0, gamma), z).matrix
    assert_allclose(matrix, [[1.0, 0.0], [2 * gamma * z, 1.0]], rtol=0, atol=1e-12)


def test_parabolic_generator_is_nilpotent():
    g = generator(1.0, 1.0)
    assert_array_equal(g @ g, np.zeros((2, 2)))


def test_attenuation_and_generator_examples():
    assert decompose_attenuation(0.2, 0.2) == (0.2, 0.0)
    assert decompose_attenuation(0.0, 0.0) == (0.0, 0.0)
    assert_array_equal(generator(2.0, 1.0), [[0.0, -1.0], [3.0, 0.0]])
    assert_array_equal(generator(1.0, 0.0), [[0.0, -1.0], [1.0, 0.0]])
    assert_array_equal(generator(1.0, 1.0), [[0.0, 0.0], [2.0, 0.0]])


def test_classify_adopted_eta_convention():
    regime = classify(5.0, 3.0, 1e-12)
    assert regime.k == pytest.approx(4.0)
    assert math.exp(2 * regime.eta) == pytest.approx(0.5)
    assert classify(2.0, 1.0, 1e-12).k == pytest.approx(math.sqrt(3.0))
    assert isinstance(classify(1.5, 1.5, 1e-12), Parabolic)


def test_pure_rotation_and_pure_squeeze():
    quarter = transfer_closed(MediumParams.from_decomposed(1.0, 0.0, 0.0), math.pi / 2).matrix
    assert_allclose(quarter, [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)
    squeeze = transfer_closed(MediumParams.from_decomposed(0.0, 0.0, 1.0), 1.0).matrix
    assert_allclose(squeeze, squeeze_45(1.0), rtol=1e-15)


def test_single_slice_product():
    z = 0.8
    step = math.exp(-ELLIPTIC.lam * z) * (squeeze_45(ELLIPTIC.mu * z) @ rotation(ELLIPTIC.gamma * z))
    assert_allclose(transfer_product(ELLIPTIC, z, 1), step, rtol=1e-15)
    assert_array_equal(transfer_product(ELLIPTIC, 0.0, 7), np.eye(2))


def test_semigroup():
    whole = transfer_closed(ELLIPTIC, 1.8).matrix
    parts = transfer_closed(ELLIPTIC, 0.7).matrix @ transfer_closed(ELLIPTIC, 1.1).matrix
    assert_allclose(parts, whole, rtol=1e-12, atol=1e-12)


def test_elliptic_period():
    params = MediumParams.from_decomposed(2.0, 0.0, 0.5)
    period = 2 * math.pi / classify(2.0, 0.5).k
    assert_allclose(transfer_closed(params, 0.4 + period).matrix, transfer_closed(params, 0.4).matrix, atol=1e-10)


@pytest.mark.parametrize('gamma', [0.5, 1.0, 2.0])
@pytest.mark.parametrize('mu', [-1.0, 0.1, 0.5, 1.0])
@pytest.mark.parametrize('z, n, rel', [(0.1, 100000, 1e-4), (1.0, 100000, 1e-4), (5.0, 1000000, 1e-3)])
def test_oracle_agreement_on_grid(gamma, mu, z, n, rel):
    params = MediumParams.from_decomposed(gamma, 0.2, mu)
    closed = transfer_closed(params, z).matrix
    assert frobenius_distance(transfer_product(params, z, n), closed) <= rel * np.linalg.norm(closed)
