"""Single-qubit quantum signal processing primitives.

A QSP sequence interleaves a fixed signal rotation with tunable processing
rotations.  Three signal-operator conventions are supported (an x-rotation,
a reflection, and a z-rotation), together with the two readout bases
``<0|.|0>`` and ``<+|.|+>``.  The library-wide canonical convention is
(WX, SZ, ``<+|.|+>``); solvers and the QSVT engine target it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.polynomial import chebyshev as cheb

from .errors import DomainError, NotUnitary, ParityError, UnsupportedConversion

UNITARITY_TOL = 1e-12
RESPONSE_TOL = 1e-10

_Z = np.diag([1.0 + 0j, -1.0 + 0j])


class SignalKind(Enum):
    WX = "wx"
    REFLECTION = "reflection"
    WZ = "wz"


class ProcessingKind(Enum):
    SZ = "sz"
    SX = "sx"


class Basis(Enum):
    ZERO_ZERO = "00"
    PLUS_PLUS = "++"


_ALLOWED = {
    (SignalKind.WX, ProcessingKind.SZ, Basis.ZERO_ZERO),
    (SignalKind.WX, ProcessingKind.SZ, Basis.PLUS_PLUS),
    (SignalKind.REFLECTION, ProcessingKind.SZ, Basis.ZERO_ZERO),
    (SignalKind.REFLECTION, ProcessingKind.SZ, Basis.PLUS_PLUS),
    (SignalKind.WZ, ProcessingKind.SX, Basis.ZERO_ZERO),
}


@dataclass(frozen=True)
class Convention:
    """A (signal, processing, basis) triple identifying a QSP variant."""

    signal: SignalKind
    processing: ProcessingKind
    basis: Basis

    def __post_init__(self):
        if (self.signal, self.processing, self.basis) not in _ALLOWED:
            raise UnsupportedConversion(
                f"convention ({self.signal.value}, {self.processing.value}, "
                f"{self.basis.value}) is not constructible"
            )

    @staticmethod
    def wx(basis: Basis = Basis.PLUS_PLUS) -> "Convention":
        return Convention(SignalKind.WX, ProcessingKind.SZ, basis)

    @staticmethod
    def reflection(basis: Basis = Basis.ZERO_ZERO) -> "Convention":
        return Convention(SignalKind.REFLECTION, ProcessingKind.SZ, basis)

    @staticmethod
    def wz() -> "Convention":
        return Convention(SignalKind.WZ, ProcessingKind.SX, Basis.ZERO_ZERO)


CANONICAL = Convention.wx(Basis.PLUS_PLUS)


@dataclass(frozen=True)
class PhaseSequence:
    """Ordered phase angles (radians) plus the convention they live in.

    Phases are stored unreduced; equality helpers reduce mod 2*pi.  A
    sequence of length d+1 realizes a degree-d polynomial response.
    """

    phases: tuple
    convention: Convention = CANONICAL

    def __post_init__(self):
        phases = tuple(float(p) for p in self.phases)
        if len(phases) < 1:
            raise DomainError("phase sequence must contain at least one angle")
        if not all(np.isfinite(phases)):
            raise DomainError("phase angles must be finite")
        object.__setattr__(self, "phases", phases)

    @property
    def degree(self) -> int:
        return len(self.phases) - 1

    def as_array(self) -> np.ndarray:
        return np.array(self.phases, dtype=float)


def phases_equal_mod_2pi(a, b, tol: float = 1e-12) -> bool:
    """Entrywise equality of two phase lists modulo 2*pi."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return False
    d = np.mod(a - b + np.pi, 2 * np.pi) - np.pi
    return bool(np.max(np.abs(d)) <= tol)


def _require_unitary(m: np.ndarray, tol: float = UNITARITY_TOL) -> np.ndarray:
    err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if err > tol:
        raise NotUnitary(f"matrix is not unitary (defect {err:.3e})")
    return m


def signal_operator(a: float, convention: Convention = CANONICAL) -> np.ndarray:
    """Signal rotation for one sample of the signal.

    For WX and REFLECTION the argument is the signal value a in [-1, 1];
    for WZ it is the rotation angle theta, with a = cos(theta/2) the
    bridging variable.
    """
    if convention.signal is SignalKind.WZ:
        theta = float(a)
        w = np.exp(0.5j * theta)
        return np.diag([w, np.conj(w)])
    a = float(a)
    if abs(a) > 1.0 + 1e-12:
        raise DomainError(f"signal value {a} outside [-1, 1]")
    a = min(1.0, max(-1.0, a))
    s = np.sqrt(1.0 - a * a)
    if convention.signal is SignalKind.WX:
        m = np.array([[a, 1j * s], [1j * s, a]])
    else:
        m = np.array([[a, s], [s, -a]], dtype=complex)
    return _require_unitary(m)


def processing_operator(phi: float, convention: Convention = CANONICAL) -> np.ndarray:
    """Processing rotation exp(i*phi*Z) or exp(i*phi*X)."""
    phi = float(phi)
    if convention.processing is ProcessingKind.SZ:
        return np.diag([np.exp(1j * phi), np.exp(-1j * phi)])
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, 1j * s], [1j * s, c]])


def evaluate_sequence(seq: PhaseSequence, a: float) -> np.ndarray:
    """Full 2x2 unitary S(phi_0) * prod_k [W(a) S(phi_k)]."""
    w = signal_operator(a, seq.convention)
    u = processing_operator(seq.phases[0], seq.convention)
    for phi in seq.phases[1:]:
        u = u @ w @ processing_operator(phi, seq.convention)
    return _require_unitary(u, 1e-11)


def _evaluate_many(seq: PhaseSequence, values: np.ndarray) -> np.ndarray:
    """Vectorized evaluate_sequence over a 1-D array of signal values."""
    values = np.asarray(values, dtype=float)
    conv = seq.convention
    if conv.signal is SignalKind.WZ:
        w = np.exp(0.5j * values)
        ws = np.zeros(values.shape + (2, 2), dtype=complex)
        ws[..., 0, 0] = w
        ws[..., 1, 1] = np.conj(w)
    else:
        if np.any(np.abs(values) > 1.0 + 1e-12):
            raise DomainError("signal values outside [-1, 1]")
        av = np.clip(values, -1.0, 1.0)
        s = np.sqrt(1.0 - av * av)
        ws = np.zeros(values.shape + (2, 2), dtype=complex)
        if conv.signal is SignalKind.WX:
            ws[..., 0, 0] = av
            ws[..., 1, 1] = av
            ws[..., 0, 1] = 1j * s
            ws[..., 1, 0] = 1j * s
        else:
            ws[..., 0, 0] = av
            ws[..., 1, 1] = -av
            ws[..., 0, 1] = s
            ws[..., 1, 0] = s
    u = np.broadcast_to(
        processing_operator(seq.phases[0], conv), values.shape + (2, 2)
    ).copy()
    for phi in seq.phases[1:]:
        u = u @ ws @ processing_operator(phi, conv)
    return u


def response(seq: PhaseSequence, a: float) -> complex:
    """Matrix element of the sequence unitary in the convention's basis."""
    u = evaluate_sequence(seq, a)
    if seq.convention.basis is Basis.ZERO_ZERO:
        return complex(u[0, 0])
    return complex(0.5 * u.sum())


def response_many(seq: PhaseSequence, values) -> np.ndarray:
    """Vectorized response over an array of signal values."""
    u = _evaluate_many(seq, np.asarray(values, dtype=float))
    if seq.convention.basis is Basis.ZERO_ZERO:
        return u[..., 0, 0]
    return 0.5 * u.sum(axis=(-2, -1))


def response_curve(seq: PhaseSequence, grid) -> list:
    """Pointwise response along a grid; returns [(a, complex), ...]."""
    grid = list(grid)
    if not grid:
        return []
    vals = response_many(seq, np.array(grid, dtype=float))
    return list(zip([float(g) for g in grid], [complex(v) for v in vals]))


def _wx_to_reflection(phases: np.ndarray) -> np.ndarray:
    d = len(phases) - 1
    out = phases.copy()
    if d == 0:
        return out
    out[0] += (2 * d - 1) * np.pi / 4
    out[-1] -= np.pi / 4
    if d >= 2:
        out[1:-1] -= np.pi / 2
    return out


def _reflection_to_wx(phases: np.ndarray) -> np.ndarray:
    d = len(phases) - 1
    out = phases.copy()
    if d == 0:
        return out
    out[0] -= (2 * d - 1) * np.pi / 4
    out[-1] += np.pi / 4
    if d >= 2:
        out[1:-1] += np.pi / 2
    return out


def convert_convention(seq: PhaseSequence, target: Convention) -> PhaseSequence:
    """Re-express a phase sequence in another convention.

    Supported pairs: WX <-> REFLECTION (response preserved in the 00 basis
    for any degree, and in the ++ basis for even degree), and
    WX/++ <-> WZ/00 (identical phases, Hadamard-conjugate operators).

    The reflection mapping shifts the end phases by pi/4 and interior
    phases by pi/2.  For odd degree the two sequence unitaries differ by a
    left factor of Z (a determinant obstruction), which leaves the
    ``<0|.|0>`` element untouched but changes ``<+|.|+>``; that pair is
    therefore rejected.
    """
    conv = seq.convention
    if target == conv:
        return seq
    phases = seq.as_array()
    d = seq.degree

    if {conv.signal, target.signal} == {SignalKind.WX, SignalKind.REFLECTION}:
        if conv.basis != target.basis:
            raise UnsupportedConversion("wx<->reflection conversion keeps the basis")
        if target.basis is Basis.PLUS_PLUS and d % 2 == 1:
            raise UnsupportedConversion(
                "wx<->reflection with the ++ basis requires even degree"
            )
        if conv.signal is SignalKind.WX:
            out = _wx_to_reflection(phases)
        else:
            out = _reflection_to_wx(phases)
        return PhaseSequence(tuple(out), target)

    wx_pp = Convention.wx(Basis.PLUS_PLUS)
    wz = Convention.wz()
    if (conv, target) in [(wx_pp, wz), (wz, wx_pp)]:
        return PhaseSequence(tuple(phases), target)

    raise UnsupportedConversion(
        f"no conversion from ({conv.signal.value},{conv.basis.value}) "
        f"to ({target.signal.value},{target.basis.value})"
    )


# ---------------------------------------------------------------------------
# P/Q decomposition and the Laurent picture


def pq_from_sequence(seq: PhaseSequence):
    """Complex Chebyshev coefficients (p_k, q_k) of the sequence unitary.

    The unitary is [[P, i*Q*s], [i*conj(Q)*s, conj(P)]] with s = sqrt(1-a^2);
    P is returned in the T_k basis (length d+1) and Q in the U_{k-1} basis
    (length d+1, q_0 = 0).
    """
    if seq.convention.signal is not SignalKind.WX:
        seq = convert_convention(seq, Convention.wx(seq.convention.basis))
    d = seq.degree
    n = 2 * (d + 2)
    theta = (2 * np.arange(n) + 1) * np.pi / (2 * n)
    a = np.cos(theta)
    u = _evaluate_many(seq, a)
    p_vals = u[:, 0, 0]
    p_coeffs = cheb.chebfit(a, p_vals, d)
    s = np.sin(theta)
    q_vals = u[:, 0, 1] / (1j * s)
    # U_{k-1}(cos t) = sin(k t) / sin(t)
    k = np.arange(1, d + 1)
    design = np.sin(np.outer(theta, k)) / s[:, None]
    q_tail, *_ = np.linalg.lstsq(design, q_vals, rcond=None)
    q_coeffs = np.concatenate([[0.0 + 0j], q_tail])
    return p_coeffs, q_coeffs


@dataclass(frozen=True)
class LaurentPair:
    """Real Laurent coefficient lists for (F, G), indexed -d..d."""

    f_coeffs: np.ndarray
    g_coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return (len(self.f_coeffs) - 1) // 2

    def evaluate(self, w: np.ndarray):
        d = self.degree
        powers = w[..., None] ** np.arange(-d, d + 1)
        return powers @ self.f_coeffs, powers @ self.g_coeffs

    def unitarity_defect(self, n_samples: int = 64) -> float:
        """max |F(w)F(1/w) + G(w)G(1/w) - 1| on the unit circle."""
        w = np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
        f, g = self.evaluate(w)
        fi, gi = self.evaluate(1.0 / w)
        return float(np.max(np.abs(f * fi + g * gi - 1.0)))


def laurent_from_pq(p_coeffs, q_coeffs) -> LaurentPair:
    """Map (P, Q) Chebyshev coefficients to the Laurent pair (F, G).

    p_coeffs are in the T_k basis and q_coeffs in the U_{k-1} basis, both
    indexed 0..d with complex entries; P must have parity d mod 2 and Q
    parity (d-1) mod 2.
    """
    p = np.asarray(p_coeffs, dtype=complex)
    q = np.asarray(q_coeffs, dtype=complex)
    d = max(len(p), len(q)) - 1
    p = np.pad(p, (0, d + 1 - len(p)))
    q = np.pad(q, (0, d + 1 - len(q)))
    tol = 1e-12
    for k in range(d + 1):
        if k % 2 != d % 2 and abs(p[k]) > tol:
            raise ParityError(f"p_{k} violates parity {d % 2}")
        # q_k multiplies U_{k-1}, a degree k-1 polynomial
        if k >= 1 and (k - 1) % 2 != (d - 1) % 2 and abs(q[k]) > tol:
            raise ParityError(f"q_{k} violates parity {(d - 1) % 2}")
    f = np.zeros(2 * d + 1)
    g = np.zeros(2 * d + 1)
    f[d] = np.real(p[0])
    g[d] = np.imag(p[0])
    for k in range(1, d + 1):
        f[d + k] = 0.5 * np.real(p[k] + q[k])
        f[d - k] = 0.5 * np.real(p[k] - q[k])
        g[d + k] = 0.5 * np.imag(p[k] - q[k])
        g[d - k] = 0.5 * np.imag(p[k] + q[k])
    return LaurentPair(f, g)


# ---------------------------------------------------------------------------
# Serialization


def phase_sequence_to_json(seq: PhaseSequence) -> str:
    payload = {
        "convention": {
            "signal": seq.convention.signal.value,
            "processing": seq.convention.processing.value,
            "basis": seq.convention.basis.value,
        },
        "phases": list(seq.phases),
    }
    return json.dumps(payload, sort_keys=True)


def phase_sequence_from_json(text: str) -> PhaseSequence:
    payload = json.loads(text)
    conv = payload["convention"]
    convention = Convention(
        SignalKind(conv["signal"]),
        ProcessingKind(conv["processing"]),
        Basis(conv["basis"]),
    )
    return PhaseSequence(tuple(float(p) for p in payload["phases"]), convention)
