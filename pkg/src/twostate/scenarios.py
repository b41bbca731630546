"""Canonical worked scenarios, registered for the command-line runner.

Each scenario builds its states from scratch, runs the relevant module
operations, re-asserts its defining numerical claims as named checks, and
returns JSON-able results plus any plot-ready CSV tables (named after the
figure they reproduce).  Scenarios are deterministic given their seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ValidationError
from .ideal import (
    abl,
    abl_generalized,
    born,
    born_backward,
    certain_outcome,
    counterfactual_decomposition_check,
    product_rule_report,
)
from .linalg import (
    DenseOperator,
    Grid1D,
    gaussian_wavefunction,
    identity,
    kron_all,
    pauli,
    projector_onto,
    spin_direction,
    spin_up,
    tensor_product,
)
from .pointer import (
    GaussianPointer,
    ensemble_mean_estimator,
    n_spin_pointer_closed_form,
    pointer_distribution_postselected,
    pointer_distribution_preselected,
)
from .reporting import csv_table
from .states import CoStateVector, GeneralizedTwoStateVector, StateVector, TwoStateVector
from .timemachine import (
    TimeMachineConfig,
    amplified_shift,
    gaussian_shift_distortion,
    run_machine,
    success_scaling_probe,
)
from .weak import certainty_cone, weak_value

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str  # int | float | bool
    default: object
    doc: str

    def coerce(self, raw):
        try:
            if self.kind == "int":
                if isinstance(raw, str):
                    return int(raw, 10)
                if float(raw) != int(raw):
                    raise ValueError
                return int(raw)
            if self.kind == "float":
                return float(raw)
            if self.kind == "bool":
                if isinstance(raw, bool):
                    return raw
                if str(raw).lower() in ("true", "1", "yes"):
                    return True
                if str(raw).lower() in ("false", "0", "no"):
                    return False
                raise ValueError
        except (TypeError, ValueError):
            raise ValidationError(f"parameter {self.name!r} expects {self.kind}, got {raw!r}") from None
        raise ValidationError(f"unknown parameter kind {self.kind!r}")


@dataclass
class ScenarioResult:
    name: str
    params: dict
    summary_line: str
    results: dict
    tables: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_dict(self) -> dict:
        return {
            "scenario": self.name,
            "params": self.params,
            "results": self.results,
            "checks": {name: bool(ok) for name, ok in self.checks},
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    summary: str
    params: tuple
    runner: object

    def run(self, overrides: dict | None = None, seed: int = 0) -> ScenarioResult:
        values = {p.name: p.default for p in self.params}
        schema = {p.name: p for p in self.params}
        for key, raw in (overrides or {}).items():
            if key not in schema:
                raise ValidationError(f"unknown parameter {key!r} for scenario {self.name!r}")
            values[key] = schema[key].coerce(raw)
        result = self.runner(values, seed)
        result.params = dict(values, seed=seed)
        return result


# ---------------------------------------------------------------------------
# box scenarios

def _three_box_states() -> TwoStateVector:
    ket = StateVector(np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0))
    bra = CoStateVector.from_ket(np.array([1.0, 1.0, -1.0]) / math.sqrt(3.0))
    return TwoStateVector(bra, ket)


def _box_projectors():
    return [projector_onto(np.eye(3)[i]) for i in range(3)]


def _run_three_box(params: dict, seed: int) -> ScenarioResult:
    n_particles = params["n_particles"]
    tsv = _three_box_states()
    p1, p2, p3 = _box_projectors()
    prob1 = abl(tsv, p1).probability_of(1.0)
    prob2 = abl(tsv, p2).probability_of(1.0)
    joint = certain_outcome(tsv, DenseOperator(p1.matrix @ p2.matrix))
    both_open = abl(tsv, p1 + p2)
    wv = [weak_value(tsv, p).value for p in (p1, p2, p3)]
    rule = product_rule_report(tsv, p1, p2)

    pressure = {}
    if 1 <= n_particles <= 6:
        dim = 3**n_particles
        ket_n = kron_all([tsv.ket.amplitudes] * n_particles)
        bra_n = kron_all([tsv.bra.ket_form] * n_particles)
        tsv_n = TwoStateVector(CoStateVector.from_ket(bra_n), StateVector(ket_n))
        for label, proj in zip(("N1", "N2", "N3"), (p1, p2, p3)):
            number_op = np.zeros((dim, dim), dtype=complex)
            for site in range(n_particles):
                ops = [np.eye(3)] * n_particles
                ops[site] = proj.matrix
                number_op += kron_all(ops)
            pressure[label] = weak_value(tsv_n, DenseOperator(number_op)).value.real
    else:
        for label, w in zip(("N1", "N2", "N3"), wv):
            pressure[label] = n_particles * w.real

    checks = [
        ("box1_certain", abs(prob1 - 1.0) <= 1e-12),
        ("box2_certain", abs(prob2 - 1.0) <= 1e-12),
        ("product_certainly_zero", joint == 0.0),
        ("weak_values_1_1_m1", max(abs(wv[0] - 1), abs(wv[1] - 1), abs(wv[2] + 1)) <= 1e-12),
        ("product_rule_fails", rule.product_rule_holds is False),
        ("pressure_box3_negative", pressure["N3"] < 0),
    ]
    results = {
        "prob_box1": prob1,
        "prob_box2": prob2,
        "joint_product_certain": joint,
        "prob_both_boxes_empty": both_open.probability_of(0.0),
        "weak_values": {k: [v.real, v.imag] for k, v in zip(("P1", "P2", "P3"), wv)},
        "pressure_weak_values": pressure,
        "product_rule": rule.to_dict(),
        "n_particles": n_particles,
    }
    line = (
        f"three_box: Prob(P1=1)={prob1:.6f} Prob(P2=1)={prob2:.6f} "
        f"(P3)_w={wv[2].real:+.3f} (N3)_w={pressure['N3']:+.3f}"
    )
    return ScenarioResult("three_box", params, line, results, checks=checks)


def _run_n_box(params: dict, seed: int) -> ScenarioResult:
    n = params["boxes"]
    if n < 3:
        raise ValidationError("need at least three boxes")
    root = math.sqrt(n - 2.0)
    ket = StateVector(np.concatenate([np.ones(n - 1), [root]]))
    bra = CoStateVector.from_ket(np.concatenate([np.ones(n - 1), [-root]]))
    tsv = TwoStateVector(bra, ket)
    probs = []
    for i in range(n - 1):
        proj = projector_onto(np.eye(n)[i])
        probs.append(abl(tsv, proj).probability_of(1.0))
    last = abl(tsv, projector_onto(np.eye(n)[n - 1]))
    wv_last = weak_value(tsv, projector_onto(np.eye(n)[n - 1])).value
    checks = [
        ("first_boxes_certain", max(abs(p - 1.0) for p in probs) <= 1e-10),
        ("weak_values_sum_to_one", abs((n - 1) * 1.0 + wv_last.real - 1.0) <= 1e-9),
    ]
    results = {
        "boxes": n,
        "prob_per_box": probs,
        "prob_last_box_occupied": last.probability_of(1.0),
        "weak_value_last_box": [wv_last.real, wv_last.imag],
    }
    line = f"n_box: {n - 1} of {n} boxes each certain (max dev {max(abs(p - 1) for p in probs):.2e})"
    return ScenarioResult("n_box", params, line, results, checks=checks)


# ---------------------------------------------------------------------------
# EPR pair

def _run_epr(params: dict, seed: int) -> ScenarioResult:
    up_x, up_y = spin_up([1, 0, 0]), spin_up([0, 1, 0])
    singlet = (tensor_product([1, 0], [0, 1]) - tensor_product([0, 1], [1, 0])) / SQRT2
    tsv = TwoStateVector(CoStateVector.from_ket(tensor_product(up_x, up_y)), StateVector(singlet))
    s1y = tensor_product(pauli("y"), identity(2))
    s2x = tensor_product(identity(2), pauli("x"))
    rule = product_rule_report(tsv, s1y, s2x)

    # guarded-partner variant: particle 1 carries only the backward state <up_x|
    backward = CoStateVector.from_ket(up_x)
    deviations = []
    for axis in "xyz":
        back = born_backward(backward, pauli(axis))
        forward = born(StateVector(up_x), pauli(axis))
        deviations.append(float(np.abs(back.probabilities - forward.probabilities).max()))

    checks = [
        ("sigma1y_certain_minus1", rule.a_certain == -1.0),
        ("sigma2x_certain_minus1", rule.b_certain == -1.0),
        ("product_certain_minus1", rule.ab_certain == -1.0),
        ("product_rule_violated", rule.product_rule_holds is False),
        ("backward_only_matches_preselected", max(deviations) <= 1e-12),
    ]
    results = {
        "product_rule": rule.to_dict(),
        "backward_only_max_deviation": max(deviations),
    }
    line = (
        f"epr_product_rule: s1y={rule.a_certain:+.0f} s2x={rule.b_certain:+.0f} "
        f"product={rule.ab_certain:+.0f} rule_holds={rule.product_rule_holds}"
    )
    return ScenarioResult("epr_product_rule", params, line, results, checks=checks)


# ---------------------------------------------------------------------------
# spin-1/2 bisector measurement (the weak-measurement workhorse)

_FIGURE_BY_CONFIG = {
    (False, 0.1): "fig2a",
    (False, 10.0): "fig2b",
    (True, 0.1): "fig3a",
    (True, 0.25): "fig3b",
    (True, 1.0): "fig3c",
    (True, 3.0): "fig3d",
    (True, 10.0): "fig3e",
}


def _run_spin_xi(params: dict, seed: int) -> ScenarioResult:
    delta = params["delta"]
    n_samples = params["ensemble"]
    postselect = params["postselect"]
    up_x, up_y = spin_up([1, 0, 0]), spin_up([0, 1, 0])
    obs = spin_direction([1, 1, 0])
    tsv = TwoStateVector(CoStateVector.from_ket(up_y), StateVector(up_x))
    wv = weak_value(tsv, obs).value
    pointer = GaussianPointer.for_spectrum(delta, [1.0, -1.0])

    if postselect:
        dist = pointer_distribution_postselected(tsv, obs, pointer)
        description = tsv
        target_mean = SQRT2
    else:
        dist = pointer_distribution_preselected(StateVector(up_x), obs, pointer)
        description = StateVector(up_x)
        target_mean = 1.0 / SQRT2

    estimate = ensemble_mean_estimator(description, obs, pointer, n_samples, seed)

    fig = _FIGURE_BY_CONFIG.get((postselect, float(delta)), "pointer")
    tables = {
        f"{fig}.csv": csv_table(
            ["Q", "probability"], zip(dist.q_grid.values.tolist(), dist.q_density.tolist())
        ),
        f"{fig}_momentum.csv": csv_table(
            ["P", "probability"], zip(dist.p_grid.values.tolist(), dist.p_density.tolist())
        ),
    }

    checks = [("weak_value_sqrt2", abs(wv - SQRT2) <= 1e-12)]
    if postselect and delta >= 10.0:
        checks.append(("peak_near_weak_value", abs(dist.peak_location - SQRT2) <= 0.05))
        checks.append(("ensemble_mean_consistent", abs(estimate.mean - SQRT2) <= 3 * estimate.stderr))
    if not postselect and delta >= 10.0:
        checks.append(("mean_is_expectation", abs(dist.mean - target_mean) <= 0.02))

    results = {
        "weak_value": [wv.real, wv.imag],
        "delta": delta,
        "postselect": postselect,
        "pointer": dist.summary(),
        "ensemble": estimate.to_dict(),
        "figure": fig,
    }
    line = (
        f"spin_xi_weak: delta={delta} postselect={postselect} peak={dist.peak_location:.4f} "
        f"mean={dist.mean:.4f} ensemble_mean={estimate.mean:.4f} (stderr {estimate.stderr:.4f})"
    )
    return ScenarioResult("spin_xi_weak", params, line, results, tables, checks)


def _run_n_spin(params: dict, seed: int) -> ScenarioResult:
    n = params["spins"]
    delta = params["delta"]
    pointer = GaussianPointer.for_spectrum(delta, [1.0, -1.0])
    closed = n_spin_pointer_closed_form(n, pointer)

    tensor_dev = None
    if n <= 8:
        up_x, up_y = spin_up([1, 0, 0]), spin_up([0, 1, 0])
        sxi = spin_direction([1, 1, 0]).matrix
        ket = kron_all([up_x] * n)
        bra = kron_all([up_y] * n)
        avg = np.zeros((2**n, 2**n), dtype=complex)
        for site in range(n):
            ops = [np.eye(2)] * n
            ops[site] = sxi
            avg += kron_all(ops)
        tsv = TwoStateVector(CoStateVector.from_ket(bra), StateVector(ket))
        direct = pointer_distribution_postselected(tsv, DenseOperator(avg / n), pointer)
        tensor_dev = float(np.abs(direct.q_density - closed.q_density).max())

    dens = closed.q_density
    peak_level = dens.max()
    above = dens > 0.01 * peak_level
    interior = above[1:-1] & (dens[1:-1] > dens[:-2]) & (dens[1:-1] >= dens[2:])
    n_peaks = int(interior.sum())

    # Exact evaluation at n=20, delta=0.25 puts the main peak near 1.33 with a
    # few-percent secondary bump; the distribution only collapses onto the
    # weak value for somewhat wider pointers, so no peak-location claim is
    # asserted here beyond what the tensor oracle certifies.
    checks = []
    if tensor_dev is not None:
        checks.append(("matches_tensor_oracle", tensor_dev <= 1e-10))

    results = {
        "spins": n,
        "delta": delta,
        "pointer": closed.summary(),
        "local_maxima_above_1pct": n_peaks,
        "tensor_oracle_max_deviation": tensor_dev,
    }
    tables = {
        "fig4.csv": csv_table(
            ["Q", "probability"], zip(closed.q_grid.values.tolist(), closed.q_density.tolist())
        )
    }
    line = (
        f"n_spin_single_system: n={n} delta={delta} peak={closed.peak_location:.4f} "
        f"local_maxima={n_peaks}"
    )
    return ScenarioResult("n_spin_single_system", params, line, results, tables, checks)


# ---------------------------------------------------------------------------
# negative kinetic energy of a tunneling particle

def _square_well_ground_state(sites: int, half_domain: float, depth: float, half_width: float):
    x = np.linspace(-half_domain, half_domain, sites)
    dx = x[1] - x[0]
    potential = np.where(np.abs(x) <= half_width, -depth, 0.0)
    kin_diag = np.full(sites, 1.0 / dx**2)
    kin_off = np.full(sites - 1, -1.0 / (2 * dx**2))
    energies, vectors = eigh_tridiagonal(kin_diag + potential, kin_off, select="i", select_range=(0, 0))
    return x, dx, potential, kin_diag, kin_off, float(energies[0]), vectors[:, 0]


def _apply_tridiagonal(diag: np.ndarray, off: np.ndarray, vec: np.ndarray) -> np.ndarray:
    out = diag * vec
    out[:-1] += off * vec[1:]
    out[1:] += off * vec[:-1]
    return out


def _run_negative_kinetic(params: dict, seed: int) -> ScenarioResult:
    sites = params["sites"]
    depth = params["well_depth"]
    half_width = params["well_half_width"]
    x_f = params["postselect_x"]
    pointer_delta = params["pointer_delta"]
    if abs(x_f) <= half_width:
        raise ValidationError("post-selection site must lie outside the well, where U = 0")

    x, dx, potential, kin_diag, kin_off, e0, psi0 = _square_well_ground_state(
        sites, 60.0, depth, half_width
    )
    i_f = int(np.argmin(np.abs(x - x_f)))
    if potential[i_f] != 0.0:
        raise ValidationError("post-selection site must sit at exactly zero potential")
    k_psi = _apply_tridiagonal(kin_diag, kin_off, psi0)
    kw = float(k_psi[i_f] / psi0[i_f])

    # same identity evaluated inside the well picks up the local potential
    i_in = int(np.argmin(np.abs(x)))
    kw_inside = float(k_psi[i_in] / psi0[i_in])

    # pointer-level confirmation on a coarse lattice (moderate coupling)
    xs, dxs, pot_s, kd_s, ko_s, e0_s, psi_s = _square_well_ground_state(161, 20.0, depth, half_width)
    k_mat = np.diag(kd_s) + np.diag(ko_s, 1) + np.diag(ko_s, -1)
    i_fs = int(np.argmin(np.abs(xs - x_f)))
    tsv = TwoStateVector(CoStateVector.from_ket(np.eye(161)[i_fs]), StateVector(psi_s))
    k_spectrum = np.linalg.eigvalsh(k_mat)
    pointer = GaussianPointer.for_spectrum(pointer_delta, k_spectrum, points=4096)
    dist = pointer_distribution_postselected(tsv, DenseOperator(k_mat), pointer)

    checks = [
        ("bound_state_exists", e0 < 0.0),
        ("kinetic_weak_value_is_ground_energy", abs(kw - e0) <= 1e-10),
        ("inside_well_shifted_by_potential", abs(kw_inside - (e0 + depth)) <= 1e-8),
        ("pointer_shift_negative", dist.mean < 0.0),
    ]
    results = {
        "ground_energy": e0,
        "kinetic_weak_value": kw,
        "kinetic_weak_value_inside_well": kw_inside,
        "postselect_x": float(x[i_f]),
        "pointer_mean": dist.mean,
        "pointer_peak": dist.peak_location,
        "pointer_delta": pointer_delta,
        "kinetic_spectral_radius": float(np.abs(k_spectrum).max()),
        "sites": sites,
    }
    line = (
        f"negative_kinetic_energy: E0={e0:.6f} K_w={kw:.6f} "
        f"pointer_mean={dist.mean:.4f} (< 0: {dist.mean < 0})"
    )
    return ScenarioResult("negative_kinetic_energy", params, line, results, checks=checks)


# ---------------------------------------------------------------------------
# spin cone of certain directions

def _spin_cone_description(chi: float) -> GeneralizedTwoStateVector:
    up = np.array([1.0, 0.0])
    down = np.array([0.0, 1.0])
    return GeneralizedTwoStateVector.from_terms(
        [
            (math.cos(chi), CoStateVector.from_ket(up), StateVector(up)),
            (-math.sin(chi), CoStateVector.from_ket(down), StateVector(down)),
        ]
    )


def _cone_probability(gtsv: GeneralizedTwoStateVector, theta: float, phi: float = 0.0) -> float:
    direction = [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    return abl_generalized(gtsv, spin_direction(direction)).probability_of(1.0, tol=1e-6)


def _run_spin_cone(params: dict, seed: int) -> ScenarioResult:
    chi = params["chi"]
    samples = params["samples"]
    if not 0.0 < chi < math.pi / 2:
        raise ValidationError("chi must lie strictly between 0 and pi/2")
    gtsv = _spin_cone_description(chi)
    cone = certainty_cone(gtsv, samples=samples)
    cos_theta = (1.0 - math.tan(chi)) / (1.0 + math.tan(chi))
    theta_derived = 2.0 * math.atan(math.sqrt(math.tan(chi)))
    theta_printed = 4.0 * math.atan(math.sqrt(math.tan(chi)))

    try:
        prob_derived = _cone_probability(gtsv, theta_derived)
    except Exception:
        prob_derived = None  # chi = pi/4: both conditional amplitudes vanish there
    prob_printed = None
    if theta_printed <= math.pi:
        try:
            prob_printed = _cone_probability(gtsv, theta_printed)
        except Exception:
            prob_printed = None

    checks = [
        ("cone_nonempty", len(cone) > 0 or abs(chi - math.pi / 4) < 1e-12),
        ("cone_probabilities_certain", all(d.probability >= 1.0 - 1e-10 for d in cone)),
        ("derived_angle_matches_half_angle", not cone or abs(math.cos(cone[0].theta) - cos_theta) <= 1e-9),
        ("derived_angle_certifies", prob_derived is None or prob_derived >= 1.0 - 1e-10),
    ]
    results = {
        "chi": chi,
        "cos_theta_derived": cos_theta,
        "theta_derived": theta_derived,
        "theta_printed_four_arctan": theta_printed,
        "prob_at_derived_angle": prob_derived,
        "prob_at_printed_angle": prob_printed,
        "printed_angle_agrees": (
            None if prob_printed is None else bool(prob_printed >= 1.0 - 1e-10)
        ),
        "directions_found": len(cone),
    }
    tables = {
        "cone.csv": csv_table(
            ["theta", "phi", "probability"],
            [(d.theta, d.phi, d.probability) for d in cone],
        )
    }
    certainty = "undefined" if prob_derived is None else f"{prob_derived:.12f}"
    printed = "undefined" if prob_printed is None else f"{prob_printed:.6f}"
    line = f"spin_cone: chi={chi:.4f} theta={theta_derived:.4f} certainty={certainty} printed-angle prob={printed}"
    return ScenarioResult("spin_cone", params, line, results, tables, checks)


# ---------------------------------------------------------------------------
# superposed time evolutions

def _run_time_machine(params: dict, seed: int) -> ScenarioResult:
    n_terms = params["n_terms"]
    eta = params["eta"]
    delta_t = params["delta_t"]
    width = params["width"]
    span = 8.0 * width
    lo = -span + min(0.0, eta * delta_t)
    hi = span + max(delta_t, eta * delta_t, 0.0)
    grid = Grid1D(lo, hi, 4096)
    fn = gaussian_wavefunction(grid, width)
    config = TimeMachineConfig(n_terms=n_terms, eta=eta, delta_t=delta_t)
    run = run_machine(fn, config)
    analytic = gaussian_shift_distortion(n_terms, eta, delta_t, width, grid)
    probe = success_scaling_probe(eta, [n_terms, n_terms + 1]) if eta > 1 else None

    shifted = amplified_shift(fn, n_terms, eta, delta_t)
    target = gaussian_wavefunction(grid, width, center=eta * delta_t)
    tables = {
        "fig5.csv": csv_table(
            ["Q", "original", "superposed", "ideally_shifted"],
            zip(
                grid.values.tolist(),
                (np.abs(fn.values) ** 2).tolist(),
                (np.abs(shifted.shifted.values) ** 2).tolist(),
                (np.abs(target.values) ** 2).tolist(),
            ),
        )
    }
    checks = [
        ("distortion_matches_analytic", abs(run.distortion - analytic) <= 1e-9 * max(analytic, 1e-30)),
        ("weights_sum_to_one", run.schedule.exact_sum() == 1),
    ]
    results = {
        "n_terms": n_terms,
        "eta": eta,
        "delta_t": delta_t,
        "width": width,
        "distortion": run.distortion,
        "success_prob": run.success_prob,
        "log10_success_prob": math.log10(run.success_prob) if run.success_prob > 0 else None,
        "net_shift": eta * delta_t,
        "amplitude_decay_per_step": (
            None if probe is None else probe.amplitude_ratios.tolist()[-1]
        ),
    }
    line = (
        f"time_machine: N={n_terms} eta={eta} distortion={run.distortion:.6g} "
        f"log10(success)={results['log10_success_prob']}"
    )
    return ScenarioResult("time_machine", params, line, results, tables, checks)


# ---------------------------------------------------------------------------
# registry

REGISTRY: dict[str, ScenarioSpec] = {}


def _register(name: str, summary: str, params: tuple, runner) -> None:
    REGISTRY[name] = ScenarioSpec(name, summary, params, runner)


_register(
    "epr_product_rule",
    "Singlet pair with both partners post-selected: certainties without the product rule",
    (),
    _run_epr,
)
_register(
    "n_box",
    "A particle certain to be found in every one of the first N-1 boxes",
    (ParamSpec("boxes", "int", 5, "number of boxes (>= 3)"),),
    _run_n_box,
)
_register(
    "negative_kinetic_energy",
    "Bound-state particle post-selected in the forbidden region: negative kinetic readings",
    (
        ParamSpec("sites", "int", 2048, "lattice sites for the weak-value identity"),
        ParamSpec("well_depth", "float", 5.0, "square-well depth"),
        ParamSpec("well_half_width", "float", 1.0, "square-well half width"),
        ParamSpec("postselect_x", "float", 5.0, "post-selection position (outside the well)"),
        ParamSpec("pointer_delta", "float", 8.0, "pointer width for the simulated measurement"),
    ),
    _run_negative_kinetic,
)
_register(
    "n_spin_single_system",
    "Average spin component of N pre/post-selected spins read in a single measurement",
    (
        ParamSpec("spins", "int", 20, "number of spin-1/2 particles"),
        ParamSpec("delta", "float", 0.25, "pointer width"),
    ),
    _run_n_spin,
)
_register(
    "spin_cone",
    "Superposed description with a whole cone of certain spin directions",
    (
        ParamSpec("chi", "float", math.pi / 8, "superposition angle chi in (0, pi/2)"),
        ParamSpec("samples", "int", 16, "azimuthal samples around the cone"),
    ),
    _run_spin_cone,
)
_register(
    "spin_xi_weak",
    "Bisector spin component between x and y selections: the sqrt(2) pointer reading",
    (
        ParamSpec("delta", "float", 10.0, "pointer width"),
        ParamSpec("ensemble", "int", 5000, "number of sampled pointer readings"),
        ParamSpec("postselect", "bool", True, "condition on the later spin outcome"),
    ),
    _run_spin_xi,
)
_register(
    "three_box",
    "One particle certain to be in box 1 and in box 2, with negative box-3 pressure",
    (ParamSpec("n_particles", "int", 5, "particles for the number-operator readings"),),
    _run_three_box,
)
_register(
    "time_machine",
    "Binomial superposition of small time shifts acting as one large shift",
    (
        ParamSpec("n_terms", "int", 13, "superposition steps N"),
        ParamSpec("eta", "float", 10.0, "amplification factor"),
        ParamSpec("delta_t", "float", 1.0, "maximal elementary shift"),
        ParamSpec("width", "float", 6.0, "width of the Gaussian test function"),
    ),
    _run_time_machine,
)


def get_scenario(name: str) -> ScenarioSpec:
    if name not in REGISTRY:
        raise ValidationError(f"unknown scenario {name!r}; available: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[name]


def counterfactual_reference_case():
    """The sigma_x / sigma_z conditioning example used by the symmetry suite."""
    return counterfactual_decomposition_check(StateVector([1.0, 0.0]), pauli("x"), pauli("z"))
