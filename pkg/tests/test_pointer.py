import numpy as np
import pytest

from twostate.errors import GridOverflow, PostSelectionImpossible, ValidationError
from twostate.linalg import (
    DenseOperator,
    Grid1D,
    gaussian_wavefunction,
    identity,
    pauli,
    spin_direction,
    spin_up,
)
from twostate.pointer import (
    GaussianPointer,
    MeasurementModel,
    ensemble_mean_estimator,
    joint_state_after_impulse,
    moment_expansion_residual,
    momentum_shift_imaginary_part,
    n_spin_pointer_closed_form,
    n_spin_weights_and_centers,
    pointer_distribution_postselected,
    pointer_distribution_preselected,
    postselected_pointer_wavefunction,
    shift_superposition,
)
from twostate.states import CoStateVector, StateVector, TwoStateVector
from twostate.weak import weak_value

SQRT2 = np.sqrt(2.0)


def bisector_tsv() -> TwoStateVector:
    return TwoStateVector(CoStateVector.from_ket(spin_up([0, 1, 0])), StateVector(spin_up([1, 0, 0])))


def sigma_xi() -> DenseOperator:
    return spin_direction([1, 1, 0])


def test_zero_observable_leaves_a_product_state():
    pointer = GaussianPointer.for_spectrum(1.0, [0.0], points=256)
    joint = joint_state_after_impulse(StateVector([0.6, 0.8]), DenseOperator(np.zeros((2, 2))), pointer)
    gauss = pointer.initial_wavefunction().values
    assert np.abs(joint.amplitudes[0] - 0.6 * gauss).max() <= 1e-12
    assert np.abs(joint.amplitudes[1] - 0.8 * gauss).max() <= 1e-12


def test_eigenstate_input_shifts_the_pointer_rigidly():
    pointer = GaussianPointer.for_spectrum(0.5, [1.0, -1.0], points=512)
    joint = joint_state_after_impulse(StateVector(spin_up([0, 0, 1])), pauli("z"), pointer)
    q = pointer.grid.values
    expected = (np.pi * 0.25) ** -0.25 * np.exp(-((q - 1.0) ** 2) / (2 * 0.25))
    assert np.abs(joint.amplitudes[0] - expected).max() <= 1e-12
    assert np.abs(joint.amplitudes[1]).max() <= 1e-14


def test_bisector_strong_measurement_is_bimodal_with_projection_weights():
    pointer = GaussianPointer.for_spectrum(0.1, [1.0, -1.0])
    joint = joint_state_after_impulse(StateVector(spin_up([1, 0, 0])), sigma_xi(), pointer)
    dens = joint.pointer_density()
    q = joint.grid.values
    dx = joint.grid.spacing
    upper = float(dens[q > 0].sum() * dx)
    assert upper == pytest.approx(np.cos(np.pi / 8) ** 2, abs=1e-10)
    assert 1 - upper == pytest.approx(np.sin(np.pi / 8) ** 2, abs=1e-10)


def test_grid_must_cover_eigenvalue_shifts():
    pointer = GaussianPointer(1.0, Grid1D(-3.0, 3.0, 128))
    with pytest.raises(GridOverflow):
        joint_state_after_impulse(StateVector([1.0, 0.0]), pauli("z"), pointer)


def test_preselected_weak_pointer_reads_the_expectation_value():
    pointer = GaussianPointer.for_spectrum(10.0, [1.0, -1.0])
    res = pointer_distribution_preselected(StateVector(spin_up([1, 0, 0])), sigma_xi(), pointer)
    assert res.mean == pytest.approx(1 / SQRT2, abs=1e-9)
    assert res.regime == "weak"


def test_preselected_strong_pointer_peaks_at_eigenvalues():
    pointer = GaussianPointer.for_spectrum(0.1, [1.0, -1.0])
    res = pointer_distribution_preselected(StateVector(spin_up([1, 0, 0])), sigma_xi(), pointer)
    dens = res.q_density
    q = res.q_grid.values
    interior = (dens[1:-1] > dens[:-2]) & (dens[1:-1] >= dens[2:]) & (dens[1:-1] > 0.01 * dens.max())
    peaks = q[1:-1][interior]
    assert len(peaks) == 2
    assert np.allclose(sorted(peaks), [-1.0, 1.0], atol=0.01)
    assert res.regime == "strong"


def test_preselected_eigenstate_mean_is_exact():
    pointer = GaussianPointer.for_spectrum(2.0, [1.0, -1.0])
    res = pointer_distribution_preselected(StateVector(spin_up([0, 0, 1])), pauli("z"), pointer)
    assert res.mean == pytest.approx(1.0, abs=1e-12)


def test_postselected_weak_pointer_peaks_outside_the_spectrum():
    pointer = GaussianPointer.for_spectrum(10.0, [1.0, -1.0])
    res = pointer_distribution_postselected(bisector_tsv(), sigma_xi(), pointer)
    assert abs(res.peak_location - SQRT2) <= 0.05
    assert res.mean == pytest.approx(1.4072125628975, abs=1e-9)  # exact Gaussian algebra


def test_postselected_strong_pointer_prefers_plus_one():
    pointer = GaussianPointer.for_spectrum(0.1, [1.0, -1.0])
    res = pointer_distribution_postselected(bisector_tsv(), sigma_xi(), pointer)
    q = res.q_grid.values
    dx = res.q_grid.spacing
    upper = float(res.q_density[q > 0].sum() * dx)
    # conditional probability of +1: cos^4 / (cos^4 + sin^4) ~ 0.9714 > 85%
    assert upper == pytest.approx(0.9714045207910317, abs=1e-9)
    assert upper > 0.85


def test_postselected_eigenstate_is_a_single_shifted_gaussian():
    up_z = spin_up([0, 0, 1])
    tsv = TwoStateVector(CoStateVector.from_ket(up_z), StateVector(up_z))
    pointer = GaussianPointer.for_spectrum(0.5, [1.0, -1.0])
    res = pointer_distribution_postselected(tsv, pauli("z"), pointer)
    assert res.peak_location == pytest.approx(1.0, abs=1e-9)
    assert res.mean == pytest.approx(1.0, abs=1e-9)


def test_postselected_distribution_matches_direct_gaussian_algebra():
    # independent code path: the closed-form amplitude combination
    # cos^2(pi/8) G(Q-1) - sin^2(pi/8) G(Q+1), squared and normalized
    delta = 2.5
    pointer = GaussianPointer.for_spectrum(delta, [1.0, -1.0])
    res = pointer_distribution_postselected(bisector_tsv(), sigma_xi(), pointer)
    q = res.q_grid.values
    phi = np.cos(np.pi / 8) ** 2 * np.exp(-((q - 1) ** 2) / (2 * delta**2)) - np.sin(
        np.pi / 8
    ) ** 2 * np.exp(-((q + 1) ** 2) / (2 * delta**2))
    direct = np.abs(phi) ** 2
    direct /= direct.sum() * res.q_grid.spacing
    assert np.abs(direct - res.q_density).max() <= 1e-12


def test_impossible_postselection_is_flagged():
    tsv = TwoStateVector(CoStateVector.from_ket([1.0, 0.0]), StateVector([0.0, 1.0]))
    pointer = GaussianPointer.for_spectrum(1.0, [1.0, -1.0], points=256)
    with pytest.raises(PostSelectionImpossible):
        postselected_pointer_wavefunction(tsv, pauli("z"), pointer)


def test_strong_limit_peak_weights_converge_to_conditional_probabilities():
    from twostate.ideal import abl

    pointer = GaussianPointer.for_spectrum(0.05, [1.0, -1.0])
    res = pointer_distribution_postselected(bisector_tsv(), sigma_xi(), pointer)
    dist = abl(bisector_tsv(), sigma_xi())
    q = res.q_grid.values
    dx = res.q_grid.spacing
    for value, prob in zip(dist.eigenvalues, dist.probabilities):
        window = np.abs(q - value) < 0.5
        weight = float(res.q_density[window].sum() * dx)
        assert abs(weight - prob) <= 1e-3


def test_momentum_shift_vanishes_for_real_weak_values():
    pointer = GaussianPointer.for_spectrum(10.0, [1.0, -1.0])
    shift = momentum_shift_imaginary_part(bisector_tsv(), sigma_xi(), pointer)
    assert abs(shift) <= 1e-9
    shift_id = momentum_shift_imaginary_part(bisector_tsv(), identity(2), pointer)
    assert abs(shift_id) <= 1e-9


def test_momentum_shift_reads_the_imaginary_part():
    # (sigma_z)_w = i for the bisector pair; the exact momentum density is
    # proportional to (1 + sin 2P) exp(-D^2 P^2), whose mean is the analytic
    # value (1/D^2) exp(-1/D^2); the weak-regime reading is Im(C_w)/D^2.
    delta = 10.0
    pointer = GaussianPointer.for_spectrum(delta, [1.0, -1.0])
    tsv = bisector_tsv()
    assert weak_value(tsv, pauli("z")).value == pytest.approx(1j, abs=1e-13)
    shift = momentum_shift_imaginary_part(tsv, pauli("z"), pointer)
    analytic = (1 / delta**2) * np.exp(-1 / delta**2)
    assert shift == pytest.approx(analytic, abs=1e-9)
    assert shift == pytest.approx(1 / delta**2, rel=0.02)


def test_momentum_shift_warns_outside_the_weak_regime():
    pointer = GaussianPointer.for_spectrum(1.0, [1.0, -1.0])
    with pytest.warns(UserWarning):
        momentum_shift_imaginary_part(bisector_tsv(), sigma_xi(), pointer)


def test_moment_expansion_residual_vanishes_for_eigenstates():
    up_z = spin_up([0, 0, 1])
    tsv = TwoStateVector(CoStateVector.from_ket(up_z), StateVector(up_z))
    pointer = GaussianPointer.for_spectrum(2.0, [1.0, -1.0])
    assert moment_expansion_residual(tsv, pauli("z"), pointer) <= 1e-12


def test_moment_expansion_residual_decreases_with_pointer_width():
    residuals = []
    for delta in (1.0, 3.0, 10.0, 30.0):
        pointer = GaussianPointer.for_spectrum(delta, [1.0, -1.0])
        residuals.append(moment_expansion_residual(bisector_tsv(), sigma_xi(), pointer))
    assert residuals[0] > residuals[1] > residuals[2] > residuals[3]
    assert residuals[2] < residuals[1] < residuals[0]
    with pytest.raises(ValidationError):
        moment_expansion_residual(bisector_tsv(), sigma_xi(), GaussianPointer.for_spectrum(1.0, [1.0]), order=1)


def test_higher_moment_terms_shrink_the_residual():
    pointer = GaussianPointer.for_spectrum(3.0, [1.0, -1.0])
    second = moment_expansion_residual(bisector_tsv(), sigma_xi(), pointer, order=2)
    fourth = moment_expansion_residual(bisector_tsv(), sigma_xi(), pointer, order=4)
    assert fourth < second


def test_ensemble_estimator_is_seeded_and_calibrated():
    pointer = GaussianPointer.for_spectrum(10.0, [1.0, -1.0])
    a = ensemble_mean_estimator(bisector_tsv(), sigma_xi(), pointer, 5000, seed=0)
    b = ensemble_mean_estimator(bisector_tsv(), sigma_xi(), pointer, 5000, seed=0)
    assert a == b
    c = ensemble_mean_estimator(bisector_tsv(), sigma_xi(), pointer, 5000, seed=1)
    assert c.mean != a.mean
    # pointer-width convention: stderr ~ sqrt(2)*sigma/sqrt(n) ~ 10/sqrt(5000)
    assert 0.10 <= a.stderr <= 0.20
    assert abs(a.mean - SQRT2) <= 3 * a.stderr


def test_preselected_ensemble_tracks_the_expectation_value():
    pointer = GaussianPointer.for_spectrum(10.0, [1.0, -1.0])
    est = ensemble_mean_estimator(StateVector(spin_up([1, 0, 0])), sigma_xi(), pointer, 5000, seed=3)
    assert abs(est.mean - 1 / SQRT2) <= 3 * est.stderr


def test_single_sample_sharp_pointer_reads_the_eigenvalue():
    pointer = GaussianPointer.for_spectrum(0.001, [1.0, -1.0], points=8192)
    est = ensemble_mean_estimator(StateVector(spin_up([0, 0, 1])), pauli("z"), pointer, 1, seed=9)
    assert abs(est.mean - 1.0) <= 0.01


def test_n_spin_closed_form_matches_full_tensor_computation():
    from twostate.linalg import kron_all

    for n in (2, 4, 6):
        pointer = GaussianPointer.for_spectrum(0.25, [1.0, -1.0])
        closed = n_spin_pointer_closed_form(n, pointer)
        up_x, up_y = spin_up([1, 0, 0]), spin_up([0, 1, 0])
        avg = np.zeros((2**n, 2**n), dtype=complex)
        for site in range(n):
            ops = [np.eye(2)] * n
            ops[site] = sigma_xi().matrix
            avg += kron_all(ops)
        tsv = TwoStateVector(
            CoStateVector.from_ket(kron_all([up_y] * n)), StateVector(kron_all([up_x] * n))
        )
        direct = pointer_distribution_postselected(tsv, DenseOperator(avg / n), pointer)
        assert np.abs(direct.q_density - closed.q_density).max() <= 1e-10


def test_n_spin_printed_center_variant_is_kept_behind_a_flag():
    weights, centers = n_spin_weights_and_centers(6)
    _, printed = n_spin_weights_and_centers(6, printed_centers=True)
    assert centers.min() == pytest.approx(-1.0) and centers.max() == pytest.approx(1.0)
    assert printed.min() == pytest.approx(1.0) and printed.max() == pytest.approx(2.0)
    # signed weights sum to cos(pi/4)^n
    assert weights.sum() == pytest.approx(np.cos(np.pi / 4) ** 6, abs=1e-12)


def test_n_spin_narrow_pointer_resolves_the_eigenvalue_comb():
    pointer = GaussianPointer.for_spectrum(0.01, [1.0, -1.0], points=8192)
    res = n_spin_pointer_closed_form(8, pointer)
    dens = res.q_density
    q = res.q_grid.values
    interior = (dens[1:-1] > dens[:-2]) & (dens[1:-1] >= dens[2:]) & (dens[1:-1] > 0.01 * dens.max())
    peaks = q[1:-1][interior]
    spacing = np.diff(sorted(peaks))
    assert np.allclose(spacing, 2 / 8, atol=0.01)


def test_shift_superposition_identity_and_uniform_shift():
    grid = Grid1D(-30.0, 30.0, 1024)
    fn = gaussian_wavefunction(grid, 1.0)
    same = shift_superposition(fn, [1.0], [0.0])
    assert np.abs(same.values - fn.values).max() <= 1e-12

    shifted = shift_superposition(fn, [0.25, 0.75], [2.0, 2.0])
    target = gaussian_wavefunction(grid, 1.0, center=2.0)
    assert np.abs(shifted.values - target.values).max() <= 1e-12


def test_shift_superposition_rejects_overflowing_shifts():
    grid = Grid1D(-10.0, 10.0, 256)
    fn = gaussian_wavefunction(grid, 1.0)
    with pytest.raises(GridOverflow):
        shift_superposition(fn, [1.0], [8.0])


def test_csv_and_summary_outputs_are_well_formed():
    pointer = GaussianPointer.for_spectrum(10.0, [1.0, -1.0], points=256)
    res = pointer_distribution_postselected(bisector_tsv(), sigma_xi(), pointer)
    summary = res.summary()
    assert set(summary) == {"peak", "mean", "delta", "regime"}
    q_csv = res.q_csv()
    assert q_csv.startswith("Q,probability\n")
    assert len(q_csv.strip().split("\n")) == 257
    assert res.p_csv().startswith("P,probability\n")
    # distributions normalize on their grids
    assert res.q_density.sum() * res.q_grid.spacing == pytest.approx(1.0, abs=1e-8)
    assert res.p_density.sum() * res.p_grid.spacing == pytest.approx(1.0, abs=1e-8)


def test_scaled_coupling_scales_the_shifts():
    pointer = GaussianPointer.for_spectrum(0.5, [2.0, -2.0], points=1024)
    model = MeasurementModel(coupling_integral=2.0)
    res = pointer_distribution_preselected(StateVector(spin_up([0, 0, 1])), pauli("z"), pointer, model)
    assert res.mean == pytest.approx(2.0, abs=1e-10)


def test_weak_limit_mean_approaches_the_weak_value():
    pointer = GaussianPointer.for_spectrum(30.0, [1.0, -1.0])
    res = pointer_distribution_postselected(bisector_tsv(), sigma_xi(), pointer)
    assert abs(res.mean - SQRT2) <= 0.02
