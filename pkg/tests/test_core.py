import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from ptcoupler.core import (
    PASSIVITY_TOL,
    ClassicalInput,
    ComplexMatrix2,
    CouplerParams,
    DecayCurve,
    Indistinguishable,
    PolarizationEntangled,
    PropagationGrid,
    ScatteringMatrix,
    validate,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
positive = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False)
nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)


def test_params_accept_basic():
    p = CouplerParams(beta1=0.0, beta2=0.0, kappa=1.0, gamma=0.5)
    assert validate(p) is p


def test_params_reject_zero_kappa():
    with pytest.raises(ValueError, match="kappa must be positive"):
        CouplerParams(0.0, 0.0, 0.0, 0.5)


def test_params_reject_negative_gamma():
    with pytest.raises(ValueError, match="gamma must be non-negative"):
        CouplerParams(0.0, 0.0, 1.0, -1.0)


@pytest.mark.parametrize("field", ["beta1", "beta2", "kappa", "gamma"])
@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_params_reject_nonfinite_naming_field(field, bad):
    kw = dict(beta1=0.0, beta2=0.0, kappa=1.0, gamma=0.0)
    kw[field] = bad
    with pytest.raises(ValueError, match=field):
        CouplerParams(**kw)


@given(beta1=finite, beta2=finite, kappa=positive, gamma=nonneg)
def test_params_any_valid_combination_constructs(beta1, beta2, kappa, gamma):
    p = CouplerParams(beta1, beta2, kappa, gamma)
    assert p.kappa > 0 and p.gamma >= 0


def test_params_frozen():
    p = CouplerParams(0.0, 0.0, 1.0, 0.0)
    with pytest.raises(dataclasses.FrozenInstanceError):
        p.gamma = 1.0


def test_matrix2_roundtrip_and_reductions():
    m = ComplexMatrix2(1 + 2j, 3j, -1.0, 2 - 1j)
    a = m.as_array()
    assert ComplexMatrix2.from_array(a) == m
    assert m.trace() == (1 + 2j) + (2 - 1j)
    assert m.determinant() == (1 + 2j) * (2 - 1j) - 3j * (-1.0)


def test_matrix2_rejects_bad_shape_and_nonfinite():
    with pytest.raises(ValueError, match="2x2"):
        ComplexMatrix2.from_array(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="m12"):
        ComplexMatrix2(0.0, complex(math.nan, 0.0), 0.0, 0.0)


def test_scattering_matrix_passivity_guard():
    # Singular value 2 is gain, not roundoff.
    with pytest.raises(ValueError, match="not passive"):
        ScatteringMatrix(ComplexMatrix2(2.0, 0.0, 0.0, 0.0), z=1.0)
    # At the tolerance edge it must pass.
    edge = 1.0 + 0.5 * PASSIVITY_TOL
    ScatteringMatrix(ComplexMatrix2(edge, 0.0, 0.0, 0.0), z=1.0)


def test_scattering_matrix_rejects_negative_z():
    with pytest.raises(ValueError, match="z must be non-negative"):
        ScatteringMatrix(ComplexMatrix2(1.0, 0.0, 0.0, 1.0), z=-0.1)


def test_scattering_matrix_det_consistency_guard():
    with pytest.raises(ValueError, match="det disagrees"):
        ScatteringMatrix(ComplexMatrix2(0.5, 0.0, 0.0, 0.5), z=1.0, det=0.5)


def test_scattering_matrix_determinant_fallback_and_override():
    m = ComplexMatrix2(0.5, 0.1j, 0.1j, 0.5)
    plain = ScatteringMatrix(m, z=1.0)
    assert plain.determinant == m.determinant()
    reduced = m.determinant() + 1e-10  # within guard, distinguishable value
    carried = ScatteringMatrix(m, z=1.0, det=reduced)
    assert carried.determinant == reduced


def test_scattering_matrix_entry_shorthands():
    m = ComplexMatrix2(0.1, 0.2j, 0.3, 0.4j)
    s = ScatteringMatrix(m, z=0.0)
    assert (s.s11, s.s12, s.s21, s.s22) == (0.1, 0.2j, 0.3, 0.4j)
    assert np.array_equal(s.as_array(), m.as_array())


def test_grid_pins_zero_and_endpoint():
    g = PropagationGrid(z_max=7.0, num_points=11)
    pts = g.points()
    assert pts[0] == 0.0 and pts[-1] == 7.0 and len(pts) == 11
    assert np.all(np.diff(pts) > 0)


def test_grid_validation():
    with pytest.raises(ValueError, match="z_max"):
        PropagationGrid(0.0, 5)
    with pytest.raises(ValueError, match="num_points"):
        PropagationGrid(1.0, 1)


def test_curve_requires_zero_start_and_increasing_z():
    with pytest.raises(ValueError, match="z = 0"):
        DecayCurve("p", ((0.5, 1.0), (1.0, 0.5)))
    with pytest.raises(ValueError, match="strictly increasing"):
        DecayCurve("p", ((0.0, 1.0), (1.0, 0.5), (1.0, 0.4)))


def test_curve_rejects_negative_values_and_bad_labels():
    with pytest.raises(ValueError, match="non-negative"):
        DecayCurve("p", ((0.0, 1.0), (1.0, -0.1)))
    with pytest.raises(ValueError, match="label"):
        DecayCurve("a,b", ((0.0, 1.0),))
    with pytest.raises(ValueError, match="label"):
        DecayCurve("", ((0.0, 1.0),))


def test_curve_from_arrays_roundtrip():
    z = np.linspace(0.0, 2.0, 5)
    v = np.exp(-z)
    c = DecayCurve.from_arrays("decay", z, v)
    assert np.array_equal(c.z_values(), z)
    assert np.array_equal(c.values(), v)
    with pytest.raises(ValueError, match="equal length"):
        DecayCurve.from_arrays("decay", z, v[:-1])


def test_classical_input_tags():
    assert ClassicalInput.SINGLE_WAVEGUIDE.value == "single_waveguide"
    assert ClassicalInput.BALANCED_ORTHOGONAL.value == "balanced_orthogonal"


def test_entangled_phi_range():
    PolarizationEntangled(0.0)
    PolarizationEntangled(math.pi)
    with pytest.raises(ValueError, match="phi"):
        PolarizationEntangled(-0.1)
    with pytest.raises(ValueError, match="phi"):
        PolarizationEntangled(math.pi + 0.1)
    with pytest.raises(ValueError, match="phi"):
        PolarizationEntangled(math.nan)


def test_indistinguishable_is_value_like():
    assert Indistinguishable() == Indistinguishable()
