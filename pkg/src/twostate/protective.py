"""Adiabatic and two-state-vector protective measurements.

Both simulations exploit the same structure: the measurement coupling is
momentum-diagonal (it involves the pointer only through P), so the joint
dynamics splits into independent system evolutions labelled by the pointer
momentum p.  Each momentum block is propagated with exact per-step matrix
exponentials and the pointer is reassembled afterwards; the only
approximation anywhere is the physical one (finite duration or finite
coupling), never time discretization of a fixed Hamiltonian.

Protection of a single state uses a slow, weak coupling dominated by a
nondegenerate free Hamiltonian: the pointer then shifts by the expectation
value of the measured observable in the occupied eigenstate.  Protection
of a two-state vector couples the target to a large pre- and post-selected
spin, whose weak-value-substituted (non-Hermitian) coupling holds both the
forward and the backward state in place, so the pointer records a weak
value instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PostSelectionImpossible, ValidationError
from .linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DenseOperator,
    WaveFunction1D,
    fourier_pair,
)
from .pointer import GaussianPointer, _peak_location
from .states import CoStateVector, StateVector, TwoStateVector
from .weak import WeakVector, weak_value

MOMENTUM_SIGNIFICANCE = 1e-10
LEAKAGE_FLAG_LEVEL = 0.01


@dataclass(frozen=True)
class AdiabaticSchedule:
    """Cosine-tapered coupling profile with unit time integral."""

    total_time: float
    ramp_fraction: float = 0.1
    steps: int = 400

    def __post_init__(self):
        if self.total_time <= 0:
            raise ValidationError("total time must be positive")
        if not 0.0 < self.ramp_fraction < 0.5:
            raise ValidationError("ramp fraction must lie in (0, 0.5)")
        if self.steps < 100:
            raise ValidationError("use at least 100 steps")

    def sampled_coupling(self) -> tuple[np.ndarray, float]:
        """Midpoint samples of g(t), rescaled so sum(g)*dt is exactly 1."""
        dt = self.total_time / self.steps
        tm = (np.arange(self.steps) + 0.5) * dt
        ramp = self.ramp_fraction * self.total_time
        g = np.ones(self.steps)
        head = tm < ramp
        g[head] = 0.5 * (1.0 - np.cos(np.pi * tm[head] / ramp))
        tail = tm > self.total_time - ramp
        g[tail] = 0.5 * (1.0 - np.cos(np.pi * (self.total_time - tm[tail]) / ramp))
        g /= g.sum() * dt
        return g, dt


@dataclass(frozen=True)
class LargeSpin:
    """Spin-N triple (Sx, Sy, Sz) on the 2N+1 dimensional ladder basis."""

    spin_n: int

    def __post_init__(self):
        if self.spin_n < 1:
            raise ValidationError("spin quantum number must be at least 1")

    @property
    def dim(self) -> int:
        return 2 * self.spin_n + 1

    def operators(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = self.spin_n
        m = np.arange(n, -n - 1, -1, dtype=float)
        sz = np.diag(m).astype(complex)
        raise_op = np.zeros((self.dim, self.dim), dtype=complex)
        for i in range(1, self.dim):
            mm = m[i]
            raise_op[i - 1, i] = math.sqrt(n * (n + 1) - mm * (mm + 1))
        sx = (raise_op + raise_op.conj().T) / 2
        sy = (raise_op - raise_op.conj().T) / 2j
        return sx, sy, sz

    def coherent_state(self, direction) -> np.ndarray:
        """Top eigenstate |S.n = N> of the spin component along `direction`."""
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        sx, sy, sz = self.operators()
        w, v = np.linalg.eigh(d[0] * sx + d[1] * sy + d[2] * sz)
        vec = v[:, -1]
        k = int(np.argmax(np.abs(vec)))
        return vec * np.exp(-1j * np.angle(vec[k]))

    def verify_algebra(self, tol: float = 1e-10) -> None:
        sx, sy, sz = self.operators()
        scale = self.spin_n * (self.spin_n + 1)
        if np.abs(sx @ sy - sy @ sx - 1j * sz).max() > tol * scale:
            raise ValidationError("commutator [Sx, Sy] != i Sz")
        casimir = sx @ sx + sy @ sy + sz @ sz
        if np.abs(casimir - scale * np.eye(self.dim)).max() > tol * scale:
            raise ValidationError("Casimir invariant is not N(N+1)")


def _significant_momentum(pointer: GaussianPointer):
    """Momentum wavefunction of the initial pointer and its significant window."""
    mom = fourier_pair(pointer.initial_wavefunction())
    mask = np.abs(mom.values) > MOMENTUM_SIGNIFICANCE * np.abs(mom.values).max()
    return mom, mask


def _pointer_density_from_momentum(mom_grid, component_block: np.ndarray, conjugate_lo: float):
    """Sum_j |FT^-1 c_j(p)|^2 for a (points, d) block of momentum amplitudes."""
    dens = None
    position_grid = None
    for j in range(component_block.shape[1]):
        wf = WaveFunction1D(mom_grid, component_block[:, j], "momentum", conjugate_lo)
        pos = fourier_pair(wf)
        position_grid = pos.grid
        term = np.abs(pos.values) ** 2
        dens = term if dens is None else dens + term
    total = dens.sum() * position_grid.spacing
    return position_grid, dens / total, total


@dataclass(frozen=True)
class AdiabaticResult:
    pointer_shift: float
    branch_weights: np.ndarray
    branch_shifts: np.ndarray
    branch_targets: np.ndarray
    energies: np.ndarray
    leakage: float
    leakage_flagged: bool
    min_gap: float

    def to_dict(self) -> dict:
        return {
            "shift": self.pointer_shift,
            "branch_weights": self.branch_weights.tolist(),
            "branch_shifts": self.branch_shifts.tolist(),
            "branch_targets": self.branch_targets.tolist(),
            "adiabaticity_leakage": self.leakage,
            "leakage_flagged": self.leakage_flagged,
            "min_gap": self.min_gap,
        }


def adiabatic_protective_measurement(
    h0: DenseOperator,
    obs: DenseOperator,
    initial: StateVector,
    schedule: AdiabaticSchedule,
    pointer: GaussianPointer,
) -> AdiabaticResult:
    """Slow, weak measurement of `obs` protected by a nondegenerate `h0`.

    Per momentum block p the system propagator is the ordered product of
    exact exponentials of h0 + g(t_k) * p * obs.  An eigenstate input
    shifts the pointer by the corresponding expectation value with error
    O(1/T); a superposition splits into branches with weights |alpha_i|^2
    whose per-branch shifts are the per-eigenstate expectation values.
    """
    if not (h0.hermitian and obs.hermitian):
        raise ValidationError("both the free Hamiltonian and the observable must be Hermitian")
    if h0.dim != obs.dim or h0.dim != initial.dim:
        raise ValidationError("dimension mismatch between Hamiltonian, observable, and state")
    energies, basis = np.linalg.eigh(h0.matrix)
    gaps = np.diff(np.sort(energies))
    min_gap = float(gaps.min()) if gaps.size else float("inf")
    if min_gap < 1e-9:
        raise ValidationError("free Hamiltonian must have a nondegenerate spectrum")

    mom, mask = _significant_momentum(pointer)
    ps = mom.grid.values[mask]
    g, dt = schedule.sampled_coupling()
    d = h0.dim

    propagators = np.broadcast_to(np.eye(d, dtype=complex), (ps.size, d, d)).copy()
    h0m, am = h0.matrix, obs.matrix
    for gk in g:
        blocks = h0m[None, :, :] + (gk * ps)[:, None, None] * am[None, :, :]
        w, v = np.linalg.eigh(blocks)
        phases = np.exp(-1j * w * dt)
        step = np.einsum("bij,bj,bkj->bik", v, phases, v.conj())
        propagators = np.einsum("bij,bjk->bik", step, propagators)

    psi0 = initial.normalized().amplitudes
    final_states = np.einsum("bij,j->bi", propagators, psi0)

    # branch decomposition in the h0 eigenbasis
    branch_amps = np.einsum("ji,bj->bi", basis.conj(), final_states)  # <E_i|psi_p>
    pointer_weights = np.abs(mom.values[mask]) ** 2
    pointer_weights = pointer_weights / pointer_weights.sum()

    alphas = basis.conj().T @ psi0
    survival = np.abs(np.einsum("ji,bjk,ki->bi", basis.conj(), propagators, basis)) ** 2
    leakage = float(1.0 - (pointer_weights[:, None] * survival * np.abs(alphas[None, :]) ** 2).sum())

    # reassemble pointer densities branch by branch and overall
    block = np.zeros((mom.grid.points, d), dtype=complex)
    block[mask] = branch_amps * mom.values[mask, None]
    grid, dens, _ = _pointer_density_from_momentum(mom.grid, block, mom.conjugate_lo)
    q = grid.values
    overall_shift = float((q * dens).sum() * grid.spacing)

    weights, shifts = [], []
    for i in range(d):
        col = np.zeros((mom.grid.points, 1), dtype=complex)
        col[mask, 0] = branch_amps[:, i] * mom.values[mask]
        wgt = float((np.abs(col[mask, 0]) ** 2).sum() / (np.abs(block[mask]) ** 2).sum())
        weights.append(wgt)
        if wgt > 1e-12:
            _, bdens, _ = _pointer_density_from_momentum(mom.grid, col, mom.conjugate_lo)
            shifts.append(float((q * bdens).sum() * grid.spacing))
        else:
            shifts.append(float("nan"))
    targets = np.array([float(np.vdot(basis[:, i], am @ basis[:, i]).real) for i in range(d)])

    return AdiabaticResult(
        pointer_shift=overall_shift,
        branch_weights=np.array(weights),
        branch_shifts=np.array(shifts),
        branch_targets=targets,
        energies=energies,
        leakage=leakage,
        leakage_flagged=bool(leakage > LEAKAGE_FLAG_LEVEL),
        min_gap=min_gap,
    )


def weak_value_substituted_hamiltonian(
    protector_tsv: TwoStateVector, spin: LargeSpin, coupling: float
) -> tuple[DenseOperator, WeakVector]:
    """Effective target Hamiltonian -lambda * (S_w . sigma) for a protected pair.

    S_w holds the weak values of (Sx, Sy, Sz) in the protector's two-state
    description; they are complex in general, so the result is non-Hermitian
    and acts differently on forward- and backward-evolving states.
    """
    if protector_tsv.dim != spin.dim:
        raise ValidationError("protector description does not match the spin dimension")
    comps = [weak_value(protector_tsv, DenseOperator(m)).value for m in spin.operators()]
    s_w = WeakVector(*comps)
    matrix = -coupling * (comps[0] * PAULI_X + comps[1] * PAULI_Y + comps[2] * PAULI_Z)
    hermitian = bool(np.abs(matrix - matrix.conj().T).max() <= 1e-12 * max(np.abs(matrix).max(), 1.0))
    return DenseOperator(matrix, hermitian=hermitian), s_w


def _bloch_direction(spinor: np.ndarray) -> np.ndarray:
    v = spinor / np.linalg.norm(spinor)
    return np.array(
        [
            2.0 * (v[0].conjugate() * v[1]).real,
            2.0 * (v[0].conjugate() * v[1]).imag,
            (abs(v[0]) ** 2 - abs(v[1]) ** 2),
        ]
    )


@dataclass(frozen=True)
class ProtectedMeasurementResult:
    pointer_shift: float
    target_value: float
    error: float
    lambda_n_over_p0: float
    post_selection_prob: float
    peak_location: float

    def to_dict(self) -> dict:
        return {
            "shift": self.pointer_shift,
            "target_value": self.target_value,
            "error": self.error,
            "lambdaN_over_P0": self.lambda_n_over_p0,
            "post_selection_prob": self.post_selection_prob,
            "peak": self.peak_location,
        }


def protected_two_state_measurement(
    target_tsv: TwoStateVector,
    obs: DenseOperator,
    spin: LargeSpin,
    coupling: float,
    pointer: GaussianPointer,
) -> ProtectedMeasurementResult:
    """Measure `obs` on a spin-1/2 two-state vector protected by a large spin.

    The protector is pre-selected along the target ket's Bloch direction and
    post-selected along the bra's; the joint system evolves for unit time
    under -lambda*S.sigma + p*obs per momentum block, only the protector is
    post-selected, and the pointer mean then approaches the real part of
    the target's weak value as the protection dominates the momentum scale
    (reported as lambda*N/P0 with P0 = 1/delta).
    """
    if target_tsv.dim != 2:
        raise ValidationError("the protected target must be a spin-1/2 description")
    alpha_dir = _bloch_direction(target_tsv.ket.normalized().amplitudes)
    beta_dir = _bloch_direction(target_tsv.bra.ket_form / np.linalg.norm(target_tsv.bra.ket_form))
    sx, sy, sz = spin.operators()
    pre_protector = spin.coherent_state(alpha_dir)
    post_protector = spin.coherent_state(beta_dir)
    dim_s = spin.dim

    protection = -coupling * (
        np.kron(sx, PAULI_X) + np.kron(sy, PAULI_Y) + np.kron(sz, PAULI_Z)
    )
    coupling_op = np.kron(np.eye(dim_s), obs.matrix)
    init = np.kron(pre_protector, target_tsv.ket.normalized().amplitudes)

    mom, mask = _significant_momentum(pointer)
    out = np.zeros((mom.grid.points, 2), dtype=complex)
    for idx in np.where(mask)[0]:
        h = protection + mom.grid.values[idx] * coupling_op
        w, v = np.linalg.eigh(h)
        evolved = v @ (np.exp(-1j * w) * (v.conj().T @ init))
        out[idx] = (post_protector.conj() @ evolved.reshape(dim_s, 2)) * mom.values[idx]

    post_norm = float((np.abs(out[mask]) ** 2).sum() * mom.grid.spacing)
    if post_norm < 1e-20:
        raise PostSelectionImpossible("protector post-selection amplitude vanishes")

    grid, dens, _ = _pointer_density_from_momentum(mom.grid, out, mom.conjugate_lo)
    q = grid.values
    shift = float((q * dens).sum() * grid.spacing)
    target = weak_value(target_tsv, obs).value.real
    p0 = 1.0 / pointer.delta
    return ProtectedMeasurementResult(
        pointer_shift=shift,
        target_value=target,
        error=abs(shift - target),
        lambda_n_over_p0=coupling * spin.spin_n / p0,
        post_selection_prob=post_norm,
        peak_location=_peak_location(grid, dens),
    )


@dataclass(frozen=True)
class ModelSpinProtection:
    """Protection recipe for an arbitrary pre/post pair via a model spin."""

    model_sigma: tuple
    protection_hamiltonian: DenseOperator
    effective_hamiltonian: DenseOperator
    protector_pre: np.ndarray
    protector_post: np.ndarray
    chi_direction: np.ndarray
    weak_vector: WeakVector


def model_spin_protection(
    pre: StateVector, post: StateVector, spin: LargeSpin, coupling: float
) -> ModelSpinProtection:
    """Build model-spin operators and the protector selections for (pre, post).

    The post state is decomposed as a|pre> + b|perp>; (pre, perp) define
    model Pauli operators on that plane (zero elsewhere), the protector is
    pre-selected along +z and post-selected along the Bloch direction of
    (a, b), and the weak-value-substituted coupling then has |pre> as its
    right eigenvector and <post| as its left eigenvector.
    """
    psi1 = pre.normalized().amplitudes
    psi2 = post.normalized().amplitudes
    a = complex(np.vdot(psi1, psi2))
    if abs(a) < 1e-12:
        raise ValidationError("orthogonal pre- and post-states cannot be jointly protected")
    residual = psi2 - a * psi1
    b = float(np.linalg.norm(residual))
    if b < 1e-14:
        perp = np.zeros_like(psi1)
        # any direction orthogonal to psi1 works when post == pre
        seed = np.zeros_like(psi1)
        seed[int(np.argmin(np.abs(psi1)))] = 1.0
        perp = seed - np.vdot(psi1, seed) * psi1
        perp = perp / np.linalg.norm(perp)
        b = 0.0
    else:
        perp = residual / b

    up, down = psi1, perp
    sig_x = np.outer(up, down.conj()) + np.outer(down, up.conj())
    sig_y = -1j * np.outer(up, down.conj()) + 1j * np.outer(down, up.conj())
    sig_z = np.outer(up, up.conj()) - np.outer(down, down.conj())

    chi = _bloch_direction(np.array([a, b]))
    protector_pre = spin.coherent_state([0.0, 0.0, 1.0])
    protector_post = spin.coherent_state(chi)

    sxo, syo, szo = spin.operators()
    ham = np.zeros((spin.dim * pre.dim, spin.dim * pre.dim), dtype=complex)
    for s_op, sig in ((sxo, sig_x), (syo, sig_y), (szo, sig_z)):
        ham += np.kron(s_op, sig)
    protection = DenseOperator(-coupling * ham)

    protector_tsv = TwoStateVector(CoStateVector.from_ket(protector_post), StateVector(protector_pre))
    comps = [weak_value(protector_tsv, DenseOperator(m)).value for m in spin.operators()]
    s_w = WeakVector(*comps)
    eff = -coupling * (comps[0] * sig_x + comps[1] * sig_y + comps[2] * sig_z)
    herm = bool(np.abs(eff - eff.conj().T).max() <= 1e-12 * max(np.abs(eff).max(), 1.0))

    return ModelSpinProtection(
        model_sigma=(sig_x, sig_y, sig_z),
        protection_hamiltonian=protection,
        effective_hamiltonian=DenseOperator(eff, hermitian=herm),
        protector_pre=protector_pre,
        protector_post=protector_post,
        chi_direction=chi,
        weak_vector=s_w,
    )
