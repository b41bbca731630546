"""Weak values of observables for pre- and post-selected descriptions.

The weak value of C for <Phi||Psi> is the (generally complex) ratio

    C_w = <Phi|C|Psi> / <Phi|Psi>.

A sufficiently gentle pointer coupling reads Re(C_w) in position and
Im(C_w) in momentum; the value may lie far outside the spectrum of C.
Every function returns the overlap magnitude alongside the value so
callers can judge the conditioning of the ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OverlapTooSmall, ValidationError
from .ideal import abl_generalized, certain_outcome
from .linalg import DenseOperator, hermitian_eigendecomposition, pauli
from .states import OVERLAP_EPSILON, GeneralizedTwoStateVector, StateVector, TwoStateVector


@dataclass(frozen=True)
class WeakValue:
    value: complex
    overlap_magnitude: float

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "overlap_magnitude": self.overlap_magnitude,
        }


@dataclass(frozen=True)
class WeakVector:
    """Weak values of (sigma_x, sigma_y, sigma_z) for a spin-1/2 description."""

    wx: complex
    wy: complex
    wz: complex

    @property
    def components(self) -> np.ndarray:
        return np.array([self.wx, self.wy, self.wz])

    def to_dict(self) -> dict:
        c = self.components
        return {"real": [float(v) for v in c.real], "imag": [float(v) for v in c.imag]}


def weak_value(tsv: TwoStateVector, obs: DenseOperator, epsilon: float = OVERLAP_EPSILON) -> WeakValue:
    ov = tsv.require_overlap(epsilon)
    num = tsv.bra.row @ (obs.matrix @ tsv.ket.amplitudes)
    return WeakValue(complex(num / ov), abs(ov))


def weak_value_generalized(
    gtsv: GeneralizedTwoStateVector, obs: DenseOperator, epsilon: float = OVERLAP_EPSILON
) -> WeakValue:
    ov = gtsv.overlap()
    scale = sum(
        abs(a) * b.norm() * k.norm() for a, b, k in zip(gtsv.weights, gtsv.bras, gtsv.kets)
    )
    if abs(ov) <= epsilon * scale:
        raise OverlapTooSmall(f"generalized overlap {abs(ov):.3e} is below the division threshold")
    return WeakValue(complex(gtsv.bilinear(obs) / ov), abs(ov))


def weak_value_degenerate_post(
    pre: StateVector, post_projector: DenseOperator, obs: DenseOperator, epsilon: float = OVERLAP_EPSILON
) -> WeakValue:
    """<Psi| P_B C |Psi> / <Psi| P_B |Psi>; the identity projector gives <C>."""
    pb = post_projector.matrix
    if not post_projector.hermitian or np.abs(pb @ pb - pb).max() > 1e-10:
        raise ValidationError("post-selection operator must be a Hermitian projector")
    psi = pre.amplitudes
    denom = complex(np.vdot(psi, pb @ psi))
    if abs(denom) <= epsilon * pre.norm() ** 2:
        raise OverlapTooSmall(f"projected norm {abs(denom):.3e} is below the division threshold")
    num = complex(np.vdot(psi, pb @ (obs.matrix @ psi)))
    return WeakValue(num / denom, abs(denom))


def expectation_value(pre: StateVector, obs: DenseOperator) -> WeakValue:
    """Pre-selected-only weak value, i.e. the ordinary expectation value."""
    psi = pre.normalized().amplitudes
    return WeakValue(complex(np.vdot(psi, obs.matrix @ psi)), 1.0)


def _as_generalized(description) -> GeneralizedTwoStateVector:
    if isinstance(description, TwoStateVector):
        return GeneralizedTwoStateVector.from_two_state(description)
    if isinstance(description, GeneralizedTwoStateVector):
        return description
    raise ValidationError(f"unsupported description {type(description).__name__}")


def weak_vector(description) -> WeakVector:
    gtsv = _as_generalized(description)
    if gtsv.dim != 2:
        raise ValidationError("weak vectors are defined for spin-1/2 descriptions only")
    comps = [weak_value_generalized(gtsv, pauli(ax)).value for ax in "xyz"]
    return WeakVector(*comps)


@dataclass(frozen=True)
class ConeDirection:
    theta: float
    phi: float
    probability: float

    def to_dict(self) -> dict:
        return {"theta": self.theta, "phi": self.phi, "probability": self.probability}


def _direction_obs(theta: float, phi: float) -> DenseOperator:
    n = (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
    return DenseOperator(n[0] * pauli("x").matrix + n[1] * pauli("y").matrix + n[2] * pauli("z").matrix)


def _certainty_probability(gtsv: GeneralizedTwoStateVector, theta: float, phi: float) -> float:
    dist = abl_generalized(gtsv, _direction_obs(theta, phi))
    return dist.probability_of(1.0, tol=1e-6)


def certainty_cone(description, samples: int = 16, tol: float = 1e-10) -> list[ConeDirection]:
    """Directions along which the spin component is +1 with certainty.

    The candidate set comes from the weak-vector criterion: the projection
    of the weak vector on the direction must equal 1 (two real constraints
    for a complex weak vector).  Every candidate is then cross-checked with
    the generalized conditional-probability formula; only directions that
    truly certify are returned.
    """
    if samples < 8:
        raise ValidationError("use at least 8 azimuthal samples")
    gtsv = _as_generalized(description)
    try:
        w = weak_vector(gtsv).components
    except OverlapTooSmall:
        return []  # overlap vanishes: no finite weak vector, no certified cone
    w_re, w_im = w.real, w.imag
    out: list[ConeDirection] = []

    def certify(nhat: np.ndarray) -> None:
        nhat = nhat / np.linalg.norm(nhat)
        theta = float(np.arccos(np.clip(nhat[2], -1, 1)))
        phi = float(np.arctan2(nhat[1], nhat[0]) % (2 * np.pi))
        try:
            prob = _certainty_probability(gtsv, theta, phi)
        except Exception:
            return
        if prob >= 1.0 - tol:
            out.append(ConeDirection(theta, phi, prob))

    if np.linalg.norm(w_im) > 1e-9:
        # Im(w) . n = 0 restricts n to a great circle; solve Re(w) . n = 1 on it.
        axis = w_im / np.linalg.norm(w_im)
        seed = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        u = np.cross(axis, seed)
        u /= np.linalg.norm(u)
        v = np.cross(axis, u)
        a, b = float(w_re @ u), float(w_re @ v)
        r = np.hypot(a, b)
        if r < 1.0 - 1e-12:
            return []
        base = np.arctan2(b, a)
        for s in (+1.0, -1.0):
            ang = base + s * np.arccos(np.clip(1.0 / r, -1, 1))
            certify(np.cos(ang) * u + np.sin(ang) * v)
        return out

    length = np.linalg.norm(w_re)
    if length < 1.0 - 1e-12:
        return []
    axis = w_re / length
    if length <= 1.0 + 1e-12:
        certify(axis)  # cone degenerates to the single direction of w
        return out
    half_angle = np.arccos(1.0 / length)
    seed = np.array([1.0, 0.0, 0.0]) if abs(axis[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(axis, seed)
    u /= np.linalg.norm(u)
    v = np.cross(axis, u)
    for ang in np.linspace(0.0, 2 * np.pi, samples, endpoint=False):
        nhat = np.cos(half_angle) * axis + np.sin(half_angle) * (np.cos(ang) * u + np.sin(ang) * v)
        certify(nhat)
    return out


def cone_to_csv(directions: list[ConeDirection]) -> str:
    lines = ["theta,phi,probability"]
    for d in directions:
        lines.append(f"{d.theta:.17g},{d.phi:.17g},{d.probability:.17g}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TheoremReport:
    applicable: bool
    passed: bool | None
    certain_value: float | None
    weak_value: complex | None
    detail: str

    def to_dict(self) -> dict:
        wv = None if self.weak_value is None else [self.weak_value.real, self.weak_value.imag]
        return {
            "applicable": self.applicable,
            "passed": self.passed,
            "certain_value": self.certain_value,
            "weak_value": wv,
            "detail": self.detail,
        }


def theorem_i_check(description, obs: DenseOperator, tol: float = 1e-10) -> TheoremReport:
    """Certain strong outcome implies the weak value equals that eigenvalue."""
    certain = certain_outcome(_as_generalized(description), obs)
    if certain is None:
        return TheoremReport(False, None, None, None, "no outcome is certain")
    wv = weak_value_generalized(_as_generalized(description), obs).value
    ok = bool(abs(wv - certain) <= tol)
    return TheoremReport(True, ok, certain, wv, "weak value matches the certain eigenvalue" if ok else "mismatch")


def theorem_ii_check(description, obs: DenseOperator, tol: float = 1e-10) -> TheoremReport:
    """For dichotomic observables, a weak value at an eigenvalue implies certainty."""
    decomp = hermitian_eigendecomposition(obs)
    if len(decomp.eigenvalues) != 2:
        raise ValidationError("theorem (ii) applies to dichotomic observables only")
    gtsv = _as_generalized(description)
    wv = weak_value_generalized(gtsv, obs).value
    matches = [c for c in decomp.eigenvalues if abs(wv - c) <= tol]
    if not matches:
        return TheoremReport(False, None, None, wv, "weak value is not an eigenvalue")
    certain = certain_outcome(gtsv, obs)
    ok = certain is not None and abs(certain - matches[0]) <= tol
    return TheoremReport(True, bool(ok), certain, wv, "certainty confirmed" if ok else "certainty missing")
