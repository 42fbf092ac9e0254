"""Singular value transformation of block-encoded operators.

Applies a canonical-convention phase sequence to a block encoding as an
alternating product of U, its inverse, and projector-controlled phase
rotations.  Phase offsets map the stored QSP phases onto projector phases
so the encoded block of the product is exactly the sequence's P polynomial
applied to the singular values; a one-ancilla combiner then isolates the
real part, which is the solver's target.  Independent eigen- and SVD-based
oracles are provided for verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .block_encoding import BlockEncoding, extract_block, projector_phase
from .errors import DomainError, NotHermitian, NotUnit, UnsupportedConversion
from .poly_approx import ChebyshevPoly, Parity
from .qsp_core import (
    CANONICAL,
    Basis,
    Convention,
    PhaseSequence,
    SignalKind,
    convert_convention,
)

_H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def _to_canonical(seq: PhaseSequence) -> PhaseSequence:
    if seq.convention == CANONICAL:
        return seq
    if seq.convention == Convention.wz():
        return convert_convention(seq, CANONICAL)
    if seq.convention.signal is SignalKind.REFLECTION and seq.convention.basis is Basis.PLUS_PLUS:
        return convert_convention(seq, CANONICAL)
    raise UnsupportedConversion(
        "engine phases must be convertible to the (wx, sz, ++) convention"
    )


@dataclass(frozen=True)
class QsvtProgram:
    """A block encoding plus the canonical phase sequence to apply to it."""

    encoding: BlockEncoding
    phases: PhaseSequence

    def __post_init__(self):
        object.__setattr__(self, "phases", _to_canonical(self.phases))

    @property
    def degree(self) -> int:
        return self.phases.degree

    @property
    def parity(self) -> Parity:
        return Parity.EVEN if self.degree % 2 == 0 else Parity.ODD


def _projector_angles(phases: np.ndarray) -> np.ndarray:
    """Map canonical QSP phases to projector-phase angles.

    End phases shift by -pi/4 and interior ones by -pi/2 (the reflection
    offsets); the extra d*pi/2 on the first angle cancels the (-i)^d
    accumulated by rewriting each reflection as an x-rotation, so the
    encoded block carries no stray global phase.
    """
    d = len(phases) - 1
    chi = phases.copy()
    if d == 0:
        return chi
    chi[0] += -np.pi / 4 + d * np.pi / 2
    chi[-1] -= np.pi / 4
    if d >= 2:
        chi[1:-1] -= np.pi / 2
    return chi


def _phased_product(encoding: BlockEncoding, phases: np.ndarray) -> np.ndarray:
    """Alternating product Phi(chi_0) U' Phi(chi_1) ... Phi(chi_d)."""
    chi = _projector_angles(phases)
    d = len(phases) - 1
    u = encoding.unitary
    pr, pl = encoding.proj_right, encoding.proj_left
    v = projector_phase(pr, chi[d])
    for k in range(d - 1, -1, -1):
        applied = d - k  # U factors applied once this slot is added
        op = u if applied % 2 == 1 else u.conj().T
        proj = pr if applied % 2 == 0 else pl
        v = projector_phase(proj, chi[k]) @ (op @ v)
    return v


def qsvt_unitary(prog: QsvtProgram) -> np.ndarray:
    """Full product unitary; its block is the complex polynomial P^(SV)."""
    return _phased_product(prog.encoding, prog.phases.as_array())


def _lift(proj: np.ndarray, branch: int) -> np.ndarray:
    """|branch><branch| (x) proj on the doubled (ancilla) space."""
    d = proj.shape[0]
    out = np.zeros((2 * d, 2 * d), dtype=complex)
    sl = slice(branch * d, (branch + 1) * d)
    out[sl, sl] = proj
    return out


def real_part_encoding(prog: QsvtProgram) -> BlockEncoding:
    """One-ancilla circuit whose block is Re(P) applied to singular values.

    Hadamards around a branch select of the phase sequence and its phase
    conjugate average the two complex blocks, leaving the real part; the
    ancilla is read out in the |0> slot.
    """
    phases = prog.phases.as_array()
    v_plus = _phased_product(prog.encoding, phases)
    v_minus = _phased_product(prog.encoding, -phases)
    d = prog.encoding.dim
    big = np.zeros((2 * d, 2 * d), dtype=complex)
    big[:d, :d] = v_plus
    big[d:, d:] = v_minus
    h = np.kron(_H, np.eye(d))
    combined = h @ big @ h
    left_proj = prog.encoding.proj_right if prog.degree % 2 == 0 else prog.encoding.proj_left
    return BlockEncoding(
        combined, _lift(prog.encoding.proj_right, 0), _lift(left_proj, 0), prog.encoding.alpha
    )


def transformed_block(prog: QsvtProgram) -> np.ndarray:
    """Re(P)^(SV) of the encoded block, in the projector-range bases.

    For even degree the transform lives in the right singular vector space
    (addressed by the right projector on both sides); for odd degree it maps
    the right space into the left one.
    """
    return extract_block(real_part_encoding(prog))


# ---------------------------------------------------------------------------
# Decomposition oracles


def svd_oracle(a: np.ndarray, poly: ChebyshevPoly) -> np.ndarray:
    """Brute-force singular value transform via a dense SVD.

    Odd parity returns W f(S) V^dag (right space to left space); even
    parity returns V f(S) V^dag, matching where the QSVT sequence leaves
    the transform.
    """
    if poly.parity is Parity.NONE:
        raise DomainError("singular value transforms need a parity-definite polynomial")
    a = np.asarray(a, dtype=complex)
    w, sigma, vh = np.linalg.svd(a)
    vals = poly(sigma)
    if poly.parity is Parity.ODD:
        return w @ np.diag(vals) @ vh
    return vh.conj().T @ np.diag(vals) @ vh


def eigen_oracle(h: np.ndarray, poly: ChebyshevPoly) -> np.ndarray:
    """Eigenbasis functional calculus sum_l f(lambda_l) |l><l|."""
    h = np.asarray(h, dtype=complex)
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise NotHermitian("eigen_oracle expects a Hermitian matrix")
    evals, evecs = np.linalg.eigh(h)
    return evecs @ np.diag(poly(evals)) @ evecs.conj().T


# ---------------------------------------------------------------------------
# Amplitude amplification (two privileged states)


def amplitude_amplification_matrix_element(
    u: np.ndarray, a0: np.ndarray, b0: np.ndarray, phases
) -> complex:
    """<A0| [prod_k U B(phi_{2k-1}) U^dag A(phi_{2k})] U |B0>.

    The rank-1 phase operators act on the privileged states only; the
    result is a degree <= d+1 polynomial in a = <A0|U|B0> realized with an
    even-length phase list.
    """
    u = np.asarray(u, dtype=complex)
    a0 = np.asarray(a0, dtype=complex).ravel()
    b0 = np.asarray(b0, dtype=complex).ravel()
    for name, vec in (("A0", a0), ("B0", b0)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            raise NotUnit(f"{name} must be a unit vector")
    phases = list(phases)
    if len(phases) % 2 != 0:
        raise DomainError("the amplification product uses an even phase count")

    def rank1_phase(vec: np.ndarray, phi: float) -> np.ndarray:
        return np.eye(len(vec), dtype=complex) + (np.exp(1j * phi) - 1.0) * np.outer(
            vec, vec.conj()
        )

    m = np.eye(u.shape[0], dtype=complex)
    for k in range(0, len(phases), 2):
        m = m @ u @ rank1_phase(b0, phases[k]) @ u.conj().T @ rank1_phase(a0, phases[k + 1])
    m = m @ u
    return complex(a0.conj() @ m @ b0)
