"""Conditional outcome statistics for ideal (projective) measurements.

The central formula: for a system described by <Phi||Psi>, the probability
of outcome c_n of an ideal measurement of C at the intermediate time is

    Prob(c_n) = |<Phi| P_n |Psi>|^2 / sum_j |<Phi| P_j |Psi>|^2

with P_n the projector onto the c_n eigenspace.  Variants cover
generalized (superposed) descriptions, degenerate post-selections, and the
pre-selected-only limit, which is the Born rule.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import PostSelectionImpossible, ValidationError
from .linalg import DenseOperator, SpectralDecomposition, hermitian_eigendecomposition
from .states import GeneralizedTwoStateVector, StateVector, TwoStateVector

# An outcome is "certain" when its conditional probability reaches this level.
CERTAINTY_THRESHOLD = 1.0 - 1e-10

# Identically zero ABL denominators are detected against this floor.
DENOMINATOR_FLOOR = 1e-24


@dataclass(frozen=True)
class OutcomeDistribution:
    """Eigenvalues of the measured observable with conditional probabilities."""

    eigenvalues: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.eigenvalues, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if e.shape != p.shape or e.ndim != 1:
            raise ValidationError("eigenvalues and probabilities must be matching 1-D arrays")
        if np.any(p < -1e-12):
            raise ValidationError("negative probability")
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValidationError(f"probabilities sum to {p.sum()}, not 1")
        object.__setattr__(self, "eigenvalues", e)
        object.__setattr__(self, "probabilities", np.clip(p, 0.0, None))

    def probability_of(self, value: float, tol: float = 1e-9) -> float:
        hits = np.where(np.abs(self.eigenvalues - value) <= tol)[0]
        if hits.size == 0:
            raise ValidationError(f"{value} is not an eigenvalue of the measured observable")
        return float(self.probabilities[hits].sum())

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "probabilities": [float(p) for p in self.probabilities],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("eigenvalue,probability\n")
        for v, p in zip(self.eigenvalues, self.probabilities):
            buf.write(f"{v:.17g},{p:.17g}\n")
        return buf.getvalue()


def _distribution_from_weights(decomp: SpectralDecomposition, weights: np.ndarray) -> OutcomeDistribution:
    total = weights.sum()
    if total <= DENOMINATOR_FLOOR:
        raise PostSelectionImpossible(
            "post-selection is incompatible with every outcome (zero denominator)"
        )
    return OutcomeDistribution(decomp.eigenvalues, weights / total)


def abl(tsv: TwoStateVector, obs: DenseOperator) -> OutcomeDistribution:
    """Conditional probabilities for a two-state description."""
    decomp = hermitian_eigendecomposition(obs)
    amps = np.array([tsv.bra.row @ (p @ tsv.ket.amplitudes) for p in decomp.projectors])
    return _distribution_from_weights(decomp, np.abs(amps) ** 2)


def abl_generalized(gtsv: GeneralizedTwoStateVector, obs: DenseOperator) -> OutcomeDistribution:
    """Conditional probabilities for a generalized (superposed) description."""
    decomp = hermitian_eigendecomposition(obs)
    amps = np.array([gtsv.bilinear(DenseOperator(p, hermitian=False)) for p in decomp.projectors])
    return _distribution_from_weights(decomp, np.abs(amps) ** 2)


def _require_projector(post_projector: DenseOperator) -> np.ndarray:
    m = post_projector.matrix
    if not post_projector.hermitian or np.abs(m @ m - m).max() > 1e-10:
        raise ValidationError("post-selection operator must be a Hermitian projector")
    return m


def abl_degenerate_post(pre: StateVector, post_projector: DenseOperator, obs: DenseOperator) -> OutcomeDistribution:
    """Conditional probabilities when the later measurement is degenerate.

    Prob(c_n) = ||P_B P_n |Psi>||^2 / sum_j ||P_B P_j |Psi>||^2.  With the
    identity projector this reduces to the Born rule.
    """
    pb = _require_projector(post_projector)
    decomp = hermitian_eigendecomposition(obs)
    weights = np.array(
        [float(np.linalg.norm(pb @ (p @ pre.amplitudes)) ** 2) for p in decomp.projectors]
    )
    return _distribution_from_weights(decomp, weights)


def born(pre: StateVector, obs: DenseOperator) -> OutcomeDistribution:
    """Pre-selected-only outcome statistics, ||P_n |Psi>||^2 (normalized)."""
    decomp = hermitian_eigendecomposition(obs)
    weights = np.array([float(np.linalg.norm(p @ pre.amplitudes) ** 2) for p in decomp.projectors])
    return _distribution_from_weights(decomp, weights)


def born_backward(bra, obs: DenseOperator) -> OutcomeDistribution:
    """Outcome statistics for a system described only by a backward state.

    ||<Phi| P_n||^2 equals <Phi|P_n|Phi>, so the statistics coincide with
    the Born rule for the ket form of the co-state.
    """
    return born(StateVector(bra.ket_form), obs)


def certain_outcome(description, obs: DenseOperator, threshold: float = CERTAINTY_THRESHOLD):
    """The eigenvalue obtained with certainty, or None if no outcome is certain."""
    if isinstance(description, TwoStateVector):
        dist = abl(description, obs)
    elif isinstance(description, GeneralizedTwoStateVector):
        dist = abl_generalized(description, obs)
    else:
        raise ValidationError(f"unsupported description {type(description).__name__}")
    idx = int(np.argmax(dist.probabilities))
    if dist.probabilities[idx] >= threshold:
        return float(dist.eigenvalues[idx])
    return None


@dataclass(frozen=True)
class ProductRuleReport:
    a_certain: float | None
    b_certain: float | None
    ab_certain: float | None
    product_rule_holds: bool | None
    commutator_norm: float

    def to_dict(self) -> dict:
        return {
            "a_certain": self.a_certain,
            "b_certain": self.b_certain,
            "ab_certain": self.ab_certain,
            "product_rule_holds": self.product_rule_holds,
            "commutator_norm": self.commutator_norm,
        }


def product_rule_report(tsv, obs_a: DenseOperator, obs_b: DenseOperator, tol: float = 1e-9) -> ProductRuleReport:
    """Certainties of A, B, and the literal product AB, and whether they multiply.

    The product observable is formed as a matrix product and must itself be
    Hermitian (true whenever A and B commute).  For pre- and post-selected
    systems certainty of A and of B does not imply AB is certain at the
    product value; the report flags exactly that.
    """
    prod = obs_a.matrix @ obs_b.matrix
    scale = max(np.abs(prod).max(), 1.0)
    if np.abs(prod - prod.conj().T).max() > 1e-10 * scale:
        raise ValidationError("product observable is not Hermitian; measure the factors separately")
    comm = float(np.linalg.norm(obs_a.matrix @ obs_b.matrix - obs_b.matrix @ obs_a.matrix, 2))
    obs_ab = DenseOperator(prod)
    a_c = certain_outcome(tsv, obs_a)
    b_c = certain_outcome(tsv, obs_b)
    ab_c = certain_outcome(tsv, obs_ab)
    holds = None
    if a_c is not None and b_c is not None and ab_c is not None:
        holds = bool(abs(a_c * b_c - ab_c) <= tol)
    return ProductRuleReport(a_c, b_c, ab_c, holds, comm)


@dataclass(frozen=True)
class CounterfactualReport:
    """Two readings of the final-outcome decomposition of Prob(C = c_n).

    Reading (a) weighs the conditional probabilities by final-outcome
    probabilities computed as if C had not been measured; reading (b) weighs
    them by the sequential probabilities with the C measurement inserted.
    Only (b) reconstructs the pre-selected-only statistics in general.
    """

    c_eigenvalues: np.ndarray
    final_eigenvalues: np.ndarray
    weights_without: np.ndarray
    weights_with: np.ndarray
    marginal_without: np.ndarray
    marginal_with: np.ndarray
    born_marginal: np.ndarray
    deviation_without: float
    deviation_with: float

    def to_dict(self) -> dict:
        return {
            "c_eigenvalues": self.c_eigenvalues.tolist(),
            "final_eigenvalues": self.final_eigenvalues.tolist(),
            "weights_without": self.weights_without.tolist(),
            "weights_with": self.weights_with.tolist(),
            "marginal_without": self.marginal_without.tolist(),
            "marginal_with": self.marginal_with.tolist(),
            "born_marginal": self.born_marginal.tolist(),
            "deviation_without": self.deviation_without,
            "deviation_with": self.deviation_with,
        }


def counterfactual_decomposition_check(
    pre: StateVector, obs_c: DenseOperator, final_obs: DenseOperator
) -> CounterfactualReport:
    """Compare the fallacious and the correct conditioning of the decomposition.

    The decomposition Prob(C=c_n) = sum_f Prob(f) * Prob(C=c_n ; f) is exact
    only when Prob(f) is computed with the intermediate measurement of C
    actually performed.  The report returns both weightings, the assembled
    marginals, and the maximum deviations of the joint tables from the
    sequential (two-measurement) Born probabilities.
    """
    c_dec = hermitian_eigendecomposition(obs_c)
    f_dec = hermitian_eigendecomposition(final_obs)
    if len(f_dec.eigenvalues) < 2:
        raise ValidationError("final observable must have at least two outcomes")
    psi = pre.normalized().amplitudes

    # Sequential truth: Prob(c_n then f) = ||P_f P_n psi||^2
    joint_true = np.zeros((len(c_dec.eigenvalues), len(f_dec.eigenvalues)))
    for i, pn in enumerate(c_dec.projectors):
        branch = pn @ psi
        for j, pf in enumerate(f_dec.projectors):
            joint_true[i, j] = np.linalg.norm(pf @ branch) ** 2

    weights_with = joint_true.sum(axis=0)
    weights_without = np.array([float(np.vdot(psi, pf @ psi).real) for pf in f_dec.projectors])

    # Conditional ABL table Prob(c_n ; f); columns with zero weight cannot
    # occur under either reading and are left at zero.
    conditional = np.zeros_like(joint_true)
    for j, pf in enumerate(f_dec.projectors):
        denom = joint_true[:, j].sum()
        if denom > DENOMINATOR_FLOOR:
            conditional[:, j] = joint_true[:, j] / denom

    joint_without = conditional * weights_without[None, :]
    joint_with = conditional * weights_with[None, :]
    born_marginal = joint_true.sum(axis=1)

    return CounterfactualReport(
        c_eigenvalues=c_dec.eigenvalues,
        final_eigenvalues=f_dec.eigenvalues,
        weights_without=weights_without,
        weights_with=weights_with,
        marginal_without=joint_without.sum(axis=1),
        marginal_with=joint_with.sum(axis=1),
        born_marginal=born_marginal,
        deviation_without=float(np.abs(joint_without - joint_true).max()),
        deviation_with=float(np.abs(joint_with - joint_true).max()),
    )
