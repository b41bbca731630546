"""Dense complex linear algebra and 1-D wavefunction utilities.

Natural units (hbar = 1) throughout.  All state vectors and operators are
dense complex numpy arrays; dimensions stay desk-scale (a hard cap of 2**20
guards tensor constructions).

Fourier convention for the 1-D grids::

    psi_tilde(P) = (2*pi)**-0.5 * integral psi(Q) exp(-i*P*Q) dQ
    psi(Q)       = (2*pi)**-0.5 * integral psi_tilde(P) exp(+i*P*Q) dP

so that a position shift by c multiplies the momentum amplitudes by
exp(-i*P*c), and a Gaussian exp(-Q**2 / (2*D**2)) maps to a Gaussian of
width 1/D.  Norms are the Riemann sums dx * sum(|psi|**2); with this
convention the discrete transform below is exactly unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ResourceLimit, ValidationError

DIMENSION_CAP = 2**20

# Hermiticity is checked relative to the largest entry.
HERMITIAN_RTOL = 1e-12


def _as_complex_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValidationError("zero-dimensional operator")
    if not np.all(np.isfinite(a)):
        raise ValidationError("operator entries must be finite")
    return a


@dataclass(frozen=True)
class DenseOperator:
    """Dense complex operator with an (optionally verified) Hermitian flag."""

    matrix: np.ndarray
    hermitian: bool = True

    def __post_init__(self):
        m = _as_complex_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        if self.hermitian:
            scale = max(np.abs(m).max(), 1.0)
            if np.abs(m - m.conj().T).max() > HERMITIAN_RTOL * scale:
                raise ValidationError("matrix marked Hermitian fails the Hermiticity check")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        if self.dim != other.dim:
            raise DimensionMismatch(f"operator dims {self.dim} and {other.dim}")
        prod = self.matrix @ other.matrix
        scale = max(np.abs(prod).max(), 1.0)
        herm = bool(np.abs(prod - prod.conj().T).max() <= HERMITIAN_RTOL * scale)
        return DenseOperator(prod, hermitian=herm)

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        if self.dim != other.dim:
            raise DimensionMismatch(f"operator dims {self.dim} and {other.dim}")
        return DenseOperator(self.matrix + other.matrix, hermitian=self.hermitian and other.hermitian)

    def __rmul__(self, scalar) -> "DenseOperator":
        s = complex(scalar)
        herm = self.hermitian and abs(s.imag) == 0.0
        return DenseOperator(s * self.matrix, hermitian=herm)


def identity(dim: int) -> DenseOperator:
    return DenseOperator(np.eye(dim, dtype=complex))


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def pauli(axis: str) -> DenseOperator:
    return DenseOperator({"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}[axis])


def spin_direction(direction) -> DenseOperator:
    """sigma . n for a unit 3-vector n (normalized here for convenience)."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    return DenseOperator(n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z)


def spin_up(direction) -> np.ndarray:
    """+1 eigenvector of sigma . n, phase fixed so the leading component is real."""
    w, v = np.linalg.eigh(spin_direction(direction).matrix)
    vec = v[:, -1]
    k = int(np.argmax(np.abs(vec)))
    return vec * np.exp(-1j * np.angle(vec[k]))


def projector_onto(vec) -> DenseOperator:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DenseOperator(np.outer(v, v.conj()))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct (grouped) eigenvalues with their orthogonal projectors."""

    eigenvalues: np.ndarray
    projectors: list[np.ndarray]
    grouping_tolerance: float

    def verify(self, tol: float = 1e-10) -> None:
        dim = self.projectors[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for p in self.projectors:
            if np.abs(p @ p - p).max() > tol:
                raise ValidationError("projector fails idempotency")
            total += p
        if np.abs(total - np.eye(dim)).max() > tol:
            raise ValidationError("projectors do not resolve the identity")
        for i in range(len(self.projectors)):
            for j in range(i + 1, len(self.projectors)):
                if np.abs(self.projectors[i] @ self.projectors[j]).max() > tol:
                    raise ValidationError("projectors are not mutually orthogonal")

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.projectors[0])
        for c, p in zip(self.eigenvalues, self.projectors):
            out += c * p
        return out


def hermitian_eigendecomposition(op: DenseOperator, tol: float | None = None) -> SpectralDecomposition:
    """Eigenvalues of a Hermitian operator, grouped into degenerate projectors.

    Eigenvalues closer than `tol` are merged into a single projector; the
    default tolerance is 1e-9 relative to the spectral radius.
    """
    if not op.hermitian:
        raise ValidationError("spectral decomposition requires a Hermitian operator")
    w, v = np.linalg.eigh(op.matrix)
    radius = max(np.abs(w).max(), 1e-300)
    if tol is None:
        tol = 1e-9 * radius
    eigenvalues: list[float] = []
    projectors: list[np.ndarray] = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[start] > tol:
            block = v[:, start:i]
            eigenvalues.append(float(w[start:i].mean()))
            projectors.append(block @ block.conj().T)
            start = i
    return SpectralDecomposition(np.array(eigenvalues), projectors, float(tol))


def evolve_unitary(state: np.ndarray, hamiltonian: DenseOperator, t: float) -> np.ndarray:
    """exp(-i*H*t) applied to a state vector (exact, via eigendecomposition)."""
    if not hamiltonian.hermitian:
        raise ValidationError("unitary evolution requires a Hermitian Hamiltonian")
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (hamiltonian.dim,):
        raise DimensionMismatch(f"state dim {psi.shape} vs operator dim {hamiltonian.dim}")
    w, v = np.linalg.eigh(hamiltonian.matrix)
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ psi))


def tensor_product(a, b):
    """Kronecker product of two operators or two vectors (dimension-capped)."""
    if isinstance(a, DenseOperator) and isinstance(b, DenseOperator):
        if a.dim * b.dim > DIMENSION_CAP:
            raise ResourceLimit(f"tensor dimension {a.dim * b.dim} exceeds cap {DIMENSION_CAP}")
        return DenseOperator(np.kron(a.matrix, b.matrix), hermitian=a.hermitian and b.hermitian)
    av, bv = np.asarray(a), np.asarray(b)
    if av.ndim == 1 and bv.ndim == 1:
        if av.size * bv.size > DIMENSION_CAP:
            raise ResourceLimit(f"tensor dimension {av.size * bv.size} exceeds cap {DIMENSION_CAP}")
        return np.kron(av.astype(complex), bv.astype(complex))
    if av.ndim == 2 and bv.ndim == 2:
        return tensor_product(DenseOperator(av, hermitian=False), DenseOperator(bv, hermitian=False)).matrix
    raise ValidationError("tensor_product expects two operators or two vectors")


def kron_all(ops: list) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
        if out.shape[0] > DIMENSION_CAP:
            raise ResourceLimit(f"tensor dimension {out.shape[0]} exceeds cap {DIMENSION_CAP}")
    return out


@dataclass(frozen=True)
class Grid1D:
    """Uniform inclusive grid on [lo, hi] with at least 16 points."""

    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if self.points < 16:
            raise ValidationError("grid needs at least 16 points")
        if not self.hi > self.lo:
            raise ValidationError("grid upper bound must exceed lower bound")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.points - 1)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


@dataclass
class WaveFunction1D:
    """Sampled complex wavefunction on a uniform grid.

    `representation` is 'position' or 'momentum'.  `conjugate_lo` remembers
    the lower bound of the conjugate-space grid so a round trip through
    fourier_pair lands on the original grid.
    """

    grid: Grid1D
    values: np.ndarray
    representation: str = "position"
    conjugate_lo: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.points,):
            raise DimensionMismatch("wavefunction values do not match the grid")
        if not np.all(np.isfinite(v)):
            raise ValidationError("wavefunction values must be finite")
        if self.representation not in ("position", "momentum"):
            raise ValidationError(f"unknown representation {self.representation!r}")
        self.values = v

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.spacing)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def normalized(self) -> "WaveFunction1D":
        n = self.norm()
        if n == 0.0:
            raise ValidationError("cannot normalize a zero wavefunction")
        return WaveFunction1D(self.grid, self.values / n, self.representation, self.conjugate_lo)

    def density(self) -> np.ndarray:
        """|psi|**2 normalized to unit integral on the grid."""
        d = np.abs(self.values) ** 2
        total = d.sum() * self.grid.spacing
        if total == 0.0:
            raise ValidationError("zero wavefunction has no density")
        return d / total

    def mean(self) -> float:
        return float(np.sum(self.grid.values * self.density()) * self.grid.spacing)


def gaussian_wavefunction(grid: Grid1D, width: float, center: float = 0.0) -> WaveFunction1D:
    """Normalized Gaussian (pi*D**2)**-0.25 * exp(-(Q-c)**2 / (2*D**2))."""
    if width <= 0:
        raise ValidationError("width must be positive")
    q = grid.values
    vals = (np.pi * width**2) ** -0.25 * np.exp(-((q - center) ** 2) / (2 * width**2))
    return WaveFunction1D(grid, vals.astype(complex))


def _momentum_grid(grid: Grid1D) -> np.ndarray:
    return np.fft.fftshift(2 * np.pi * np.fft.fftfreq(grid.points, d=grid.spacing))


def fourier_pair(wf: WaveFunction1D) -> WaveFunction1D:
    """Unitary transform between position and momentum representations.

    Implemented as an FFT with pre/post phase factors so arbitrary (uniform)
    grid offsets are handled exactly; fourier_pair(fourier_pair(wf)) recovers
    wf on its original grid.
    """
    n = wf.grid.points
    dx = wf.grid.spacing
    x0 = wf.grid.lo
    if wf.representation == "position":
        p = _momentum_grid(wf.grid)
        # psi_tilde(p_k) = dx/sqrt(2 pi) * exp(-i p_k x0) * FFT[psi_j * exp(-i p_min j dx)]
        inner = wf.values * np.exp(-1j * p[0] * dx * np.arange(n))
        transformed = np.fft.fft(inner)
        out_vals = dx / np.sqrt(2 * np.pi) * np.exp(-1j * p * x0) * transformed
        out_grid = Grid1D(float(p[0]), float(p[-1]), n)
        return WaveFunction1D(out_grid, out_vals, "momentum", conjugate_lo=x0)
    # momentum -> position: psi_j = dp/sqrt(2 pi) * sum_k psi_tilde_k exp(+i p_k x_j)
    p0 = wf.grid.lo
    dp = wf.grid.spacing
    dx_out = 2 * np.pi / (n * dp)
    x_lo = wf.conjugate_lo if wf.conjugate_lo is not None else -np.pi / dp
    x = x_lo + dx_out * np.arange(n)
    inner = wf.values * np.exp(1j * wf.grid.values * x_lo)
    transformed = np.fft.ifft(inner) * n
    out_vals = dp / np.sqrt(2 * np.pi) * np.exp(1j * p0 * (x - x_lo)) * transformed
    out_grid = Grid1D(float(x[0]), float(x[-1]), n)
    return WaveFunction1D(out_grid, out_vals, "position", conjugate_lo=p0)
