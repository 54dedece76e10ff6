"""Classical coupled-mode dynamics: supermodes, regime classification,
power decay curves.

The symmetric lossy coupler (beta1 = beta2 = beta) has supermodes

    lambda_{1,2} = beta - i gamma/2 +/- sqrt(kappa^2 - (gamma/2)^2)

which coalesce, eigenvectors included, at gamma = 2 kappa. Below that point
the net power beats while decaying at the uniform rate gamma; above it the
decay splits into a fast and a slow branch and raising the loss rate
paradoxically raises the surviving power (loss-induced transparency). At
the coalescence point itself the slow factor is algebraic, P ~ z^2 e^{-gamma z}.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import (
    ClassicalInput,
    ComplexMatrix2,
    CouplerParams,
    DecayCurve,
    PropagationGrid,
    validate,
)
from .scattering import scattering_matrix

__all__ = [
    "Regime",
    "SupermodePair",
    "EpRegime",
    "EP_DISCRIMINANT_TOL",
    "coupler_matrix",
    "supermodes",
    "classify_ep",
    "propagate_classical",
    "classical_power_curve",
]

# Relative width of the "at coalescence" band of the discriminant
# kappa^2 - (gamma/2)^2, in units of kappa^2.
EP_DISCRIMINANT_TOL = 1e-12


class Regime(Enum):
    BELOW = "below"
    AT = "at"
    ABOVE = "above"


@dataclass(frozen=True)
class SupermodePair:
    """Eigenvalues of the coupled-mode matrix, slowest-decaying first."""

    lambda1: complex
    lambda2: complex

    def __post_init__(self):
        for name in ("lambda1", "lambda2"):
            lam = complex(getattr(self, name))
            # Passive system: decaying modes only, up to roundoff slack.
            if lam.imag > 1e-9 * (1.0 + abs(lam)):
                raise ValueError(f"{name} has positive imaginary part {lam.imag!r}")

    def gap(self) -> float:
        return abs(self.lambda1 - self.lambda2)


@dataclass(frozen=True)
class EpRegime:
    """Classification of the symmetric coupler against its coalescence point."""

    regime: Regime
    discriminant: float


def coupler_matrix(params: CouplerParams) -> ComplexMatrix2:
    """Coupled-mode matrix M: diag propagation constants, kappa off-diagonal,
    the loss as the imaginary part of the lossy arm's diagonal element."""
    validate(params)
    return ComplexMatrix2(
        complex(params.beta1),
        complex(params.kappa),
        complex(params.kappa),
        complex(params.beta2, -params.gamma),
    )


def supermodes(params: CouplerParams) -> SupermodePair:
    """Eigenvalues of M from the closed-form quadratic.

    The pair is ordered by descending imaginary part (slowest-decaying
    first), ties broken by ascending real part. Using the explicit root
    instead of a generic eigensolver keeps the gap exactly zero at the
    coalescence point, where iterative solvers are ill-conditioned.
    """
    validate(params)
    half_trace = 0.5 * (params.beta1 + params.beta2 - 1j * params.gamma)
    d = 0.5 * (params.beta1 - params.beta2 + 1j * params.gamma)
    omega = np.sqrt(complex(params.kappa * params.kappa + d * d))
    lams = sorted(
        (complex(half_trace + omega), complex(half_trace - omega)),
        key=lambda lam: (-lam.imag, lam.real),
    )
    return SupermodePair(lams[0], lams[1])


def classify_ep(params: CouplerParams) -> EpRegime:
    """Place the symmetric coupler below, at, or above coalescence.

    Only defined for beta1 = beta2, where the discriminant
    kappa^2 - (gamma/2)^2 is real and its sign decides the regime; the
    "at" band has half-width EP_DISCRIMINANT_TOL * kappa^2. For detuned
    couplers the eigenvalue structure never coalesces; inspect supermodes
    directly instead.
    """
    validate(params)
    if params.beta1 != params.beta2:
        raise ValueError(
            "classify_ep requires beta1 == beta2; for a detuned coupler use supermodes"
        )
    disc = params.kappa * params.kappa - 0.25 * params.gamma * params.gamma
    tol = EP_DISCRIMINANT_TOL * params.kappa * params.kappa
    if disc > tol:
        regime = Regime.BELOW
    elif disc < -tol:
        regime = Regime.ABOVE
    else:
        regime = Regime.AT
    return EpRegime(regime, disc)


def propagate_classical(params: CouplerParams, c0, z: float) -> np.ndarray:
    """Amplitudes (c1, c2) after distance z for launch amplitudes c0."""
    c0 = np.asarray(c0, dtype=complex)
    if c0.shape != (2,):
        raise ValueError("c0 must be a pair of complex amplitudes")
    if not np.all(np.isfinite(c0.view(float))):
        raise ValueError("c0 must be finite")
    return scattering_matrix(params, z).as_array() @ c0


def classical_power_curve(
    params: CouplerParams, input_state: ClassicalInput, grid: PropagationGrid
) -> DecayCurve:
    """Total guided power P(z) = |c1|^2 + |c2|^2, normalized to P(0) = 1.

    SINGLE_WAVEGUIDE launches everything in arm 1. BALANCED_ORTHOGONAL
    splits power evenly between the arms in orthogonal polarizations, so
    the two channels propagate independently and add in power:
    P = (P_arm1_launch + P_arm2_launch) / 2.
    """
    validate(params)
    if not isinstance(input_state, ClassicalInput):
        raise ValueError(f"unknown classical input {input_state!r}")
    zs = grid.points()
    values = np.empty_like(zs)
    for i, z in enumerate(zs):
        s = scattering_matrix(params, z)
        p_from_arm1 = abs(s.s11) ** 2 + abs(s.s21) ** 2
        if input_state is ClassicalInput.SINGLE_WAVEGUIDE:
            values[i] = p_from_arm1
        else:
            p_from_arm2 = abs(s.s12) ** 2 + abs(s.s22) ** 2
            values[i] = 0.5 * (p_from_arm1 + p_from_arm2)
    return DecayCurve.from_arrays(f"power_{input_state.value}", zs, values)
