"""Two-mode entanglement certification.

Builds the 9x9 matrix of moments over the operator set
{1, D(alpha_1), D(alpha_2)} x {1, D(beta_1), D(beta_2)}, applies the
partial transpose on the first mode's indices, and extracts minimal
eigenvalues and witness operators. A negative eigenvalue of the partially
transposed matrix certifies entanglement; an eigenvector belonging to it
yields a linear witness that needs only eight independent correlations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .nonclassicality import min_eigenvalue
from .states import TwoModeState, _check_finite

PHASE_TOL = 1e-12
IMAG_TOL = 1e-10
COEFF_PRUNE = 1e-14


@dataclass(frozen=True)
class DisplacementWord:
    """phase * D(amp1) x D(amp2), with |phase| = 1."""

    phase: complex
    amp1: complex
    amp2: complex

    def __post_init__(self):
        phase = _check_finite(self.phase, "phase")
        if abs(abs(phase) - 1.0) > PHASE_TOL:
            raise ValueError(f"|phase| must be 1, got {abs(phase)!r}")
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "amp1", _check_finite(self.amp1))
        object.__setattr__(self, "amp2", _check_finite(self.amp2))

    def dagger(self) -> "DisplacementWord":
        return DisplacementWord(self.phase.conjugate(), -self.amp1, -self.amp2)

    def expectation(self, state: TwoModeState) -> complex:
        return self.phase * state.chi2(self.amp1, self.amp2)


IDENTITY_WORD = DisplacementWord(1.0, 0.0, 0.0)


def word_product(a: DisplacementWord, b: DisplacementWord) -> DisplacementWord:
    """Operator product a.b via D(x)D(y) = e^{i Im(x y*)} D(x + y) per mode."""
    phase = a.phase * b.phase * cmath.exp(
        1j * ((a.amp1 * b.amp1.conjugate()).imag
              + (a.amp2 * b.amp2.conjugate()).imag))
    # renormalize the modulus; rounding drift otherwise accumulates
    phase /= abs(phase)
    return DisplacementWord(phase, a.amp1 + b.amp1, a.amp2 + b.amp2)


class Settings(NamedTuple):
    """The four displacement settings of the 9x9 moment matrix."""

    alpha1: complex
    alpha2: complex
    beta1: complex
    beta2: complex


def standard_settings(xi0: float, eps: float) -> Settings:
    """Settings tuned to the entangled cat of size xi0:
    alpha_1 = 2 xi0, alpha_2 = i eps / (2 xi0), beta = -alpha."""
    if not xi0 > 0:
        raise ValueError(f"xi0 must be > 0, got {xi0}")
    a1 = complex(2.0 * xi0)
    a2 = 1j * eps / (2.0 * xi0)
    return Settings(a1, a2, -a1, -a2)


@dataclass(frozen=True)
class MomentMatrix9:
    """9x9 Gram matrix of the two-mode displacement words on a state.

    Basis index (i, j) -> 3 i + j with i over mode-1 operators
    {1, D(alpha_1), D(alpha_2)} and j over mode-2 {1, D(beta_1), D(beta_2)}.
    correlations maps the distinct evaluation points (amp1, amp2), one
    representative per conjugate pair, to the chi2 values behind the matrix.
    """

    settings: Settings
    entries: np.ndarray
    correlations: dict


def _canonical_point(a1: complex, a2: complex):
    """Pick one representative of {(a1, a2), (-a1, -a2)} deterministically."""
    key = (a1.real, a1.imag, a2.real, a2.imag)
    neg = (-a1.real, -a1.imag, -a2.real, -a2.imag)
    return key if key >= neg else neg


def moments9(state: TwoModeState, settings: Settings) -> MomentMatrix9:
    """Build the 9x9 moment matrix M_ab = <(V_a)^dag V_b> via chi2."""
    mode1 = (0.0 + 0j, settings.alpha1, settings.alpha2)
    mode2 = (0.0 + 0j, settings.beta1, settings.beta2)
    words = [DisplacementWord(1.0, a, b) for a in mode1 for b in mode2]
    m = np.empty((9, 9), dtype=complex)
    correlations = {}
    for a in range(9):
        for b in range(9):
            if b < a:
                m[a, b] = m[b, a].conjugate()
                continue
            if b == a:
                m[a, b] = 1.0
                continue
            w = word_product(words[a].dagger(), words[b])
            val = state.chi2(w.amp1, w.amp2)
            m[a, b] = w.phase * val
            correlations.setdefault(_canonical_point(w.amp1, w.amp2), val)
    return MomentMatrix9(settings, m, correlations)


def partial_transpose(m) -> np.ndarray:
    """Transpose the mode-1 indices: [M^G]_(i,j),(k,l) = M_(k,j),(i,l)."""
    entries = m.entries if isinstance(m, MomentMatrix9) else np.asarray(m)
    if entries.shape != (9, 9):
        raise ValueError(f"expected a 9x9 matrix, got {entries.shape}")
    return entries.reshape(3, 3, 3, 3).transpose(2, 1, 0, 3).reshape(9, 9)


def ppt_min_eig(state: TwoModeState, settings: Settings) -> float:
    """Minimal eigenvalue of the partially transposed moment matrix;
    a negative value certifies entanglement."""
    return min_eigenvalue(partial_transpose(moments9(state, settings)))


def canonical_eta(w: float) -> np.ndarray:
    """The empirical minimal eigenvector of M^G for large cat states:
    [w, 0, -iw, 0, -sqrt(1-4w^2), 0, iw, 0, w], unit norm."""
    if not 0.0 < w <= 0.5:
        raise ValueError(f"w must be in (0, 1/2], got {w}")
    mid = -math.sqrt(1.0 - 4.0 * w * w)
    return np.array([w, 0.0, -1j * w, 0.0, mid, 0.0, 1j * w, 0.0, w],
                    dtype=complex)


@dataclass(frozen=True)
class WitnessDescriptor:
    """Finite sum of coefficient-weighted displacement words whose
    expectation is real on every two-mode state."""

    terms: tuple[tuple[complex, DisplacementWord], ...]
    metadata: dict

    def to_json(self) -> list[dict]:
        return [{"coeff": [c.real, c.imag],
                 "phase": [word.phase.real, word.phase.imag],
                 "amp1": [word.amp1.real, word.amp1.imag],
                 "amp2": [word.amp2.real, word.amp2.imag]}
                for c, word in self.terms]


def _reduce_terms(raw, metadata) -> WitnessDescriptor:
    """Fold phases into coefficients, merge equal words, sort canonically."""
    acc = {}
    for coeff, word in raw:
        key = (word.amp1.real, word.amp1.imag, word.amp2.real, word.amp2.imag)
        acc[key] = acc.get(key, 0j) + coeff * word.phase
    terms = tuple(
        (acc[key], DisplacementWord(1.0, complex(key[0], key[1]),
                                    complex(key[2], key[3])))
        for key in sorted(acc) if abs(acc[key]) > COEFF_PRUNE)
    return WitnessDescriptor(terms, metadata)


def witness_from_eta(eta: np.ndarray, settings: Settings) -> WitnessDescriptor:
    """Witness W with <W> = tr{eta eta^dag M^G(rho)} for every state rho."""
    eta = np.asarray(eta, dtype=complex)
    if eta.shape != (9,):
        raise ValueError(f"eta must be a 9-vector, got shape {eta.shape}")
    if abs(np.linalg.norm(eta) - 1.0) > IMAG_TOL:
        raise ValueError(f"eta must have unit norm, got {np.linalg.norm(eta)!r}")
    mode1 = (0.0 + 0j, settings.alpha1, settings.alpha2)
    mode2 = (0.0 + 0j, settings.beta1, settings.beta2)
    raw = []
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    coeff = eta[3 * i + j] * eta[3 * k + l].conjugate()
                    if coeff == 0:
                        continue
                    left = DisplacementWord(1.0, mode1[i], mode2[l])
                    right = DisplacementWord(1.0, mode1[k], mode2[j])
                    raw.append((coeff, word_product(left.dagger(), right)))
    return _reduce_terms(raw, {"settings": settings, "eta": tuple(eta)})


def witness_expectation(state: TwoModeState, wd: WitnessDescriptor) -> float:
    """<W> on the state; the imaginary residue must vanish."""
    total = sum(c * word.expectation(state) for c, word in wd.terms)
    if abs(total.imag) > IMAG_TOL:
        raise ArithmeticError(
            f"witness expectation has imaginary residue {total.imag:g}")
    return total.real


def paper_witness(xi0: float, eps: float, w: float) -> WitnessDescriptor:
    """The explicit eight-correlation witness at the standard settings.

    Built from the three measurement settings s1 = 2 xi0,
    s2 = i eps / (2 xi0), s3 = s2 - s1; agrees with
    witness_from_eta(canonical_eta(w), standard_settings(xi0, eps)) as an
    operator.
    """
    settings = standard_settings(xi0, eps)
    if not 0.0 < w <= 0.5:
        raise ValueError(f"w must be in (0, 1/2], got {w}")
    s1 = complex(2.0 * xi0)
    s2 = 1j * eps / (2.0 * xi0)
    s3 = s2 - s1
    u = math.sqrt(1.0 - 4.0 * w * w)
    w2 = w * w
    raw = [(1.0 + 0j, IDENTITY_WORD)]
    # w^2 [D(s2) - D(-s2)] x [D(s2) - D(-s2)]
    for sa, siga in ((s2, 1), (-s2, -1)):
        for sb, sigb in ((s2, 1), (-s2, -1)):
            raw.append((w2 * siga * sigb, DisplacementWord(1.0, sa, sb)))
    # 2i w^2 (1 x [D(s2) - D(-s2)] - [D(s2) - D(-s2)] x 1); the sign of this
    # group is fixed by the operator equivalence with witness_from_eta
    for sa, siga in ((s2, 1), (-s2, -1)):
        raw.append((-2j * w2 * siga, DisplacementWord(1.0, sa, 0.0)))
        raw.append((2j * w2 * siga, DisplacementWord(1.0, 0.0, sa)))
    # -w sqrt(1-4w^2) { diagonal s1/s3 correlations ... }
    g = -w * u
    for sa in (s1, -s1, s3, -s3):
        raw.append((g + 0j, DisplacementWord(1.0, sa, sa)))
    # cross correlations; the e^{+-i eps} pairing is fixed by the operator
    # equivalence with witness_from_eta
    ph = cmath.exp(-1j * eps)
    raw.append((g * 1j * ph, DisplacementWord(1.0, -s1, s3)))
    raw.append((g * 1j * ph, DisplacementWord(1.0, -s3, s1)))
    raw.append((g * -1j * ph.conjugate(), DisplacementWord(1.0, s1, -s3)))
    raw.append((g * -1j * ph.conjugate(), DisplacementWord(1.0, s3, -s1)))
    return _reduce_terms(raw, {"settings": settings, "xi0": xi0,
                               "eps": eps, "w": w})
