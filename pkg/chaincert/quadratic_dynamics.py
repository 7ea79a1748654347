# -*- coding: utf-8 -*-

# chaincert - Certified truncation error bounds for chain-mapped spin-boson simulations
#
# Copyright (C) 2024-2026
# - Helmholtz Centre Potsdam - GFZ German Research Centre for Geosciences Potsdam,
#   Germany (https://www.gfz-potsdam.de/)
#
# Licensed only under the EUPL, Version 1.2 or - as soon they will be approved
# by the European Commission - subsequent versions of the EUPL (the "Licence").
# You may not use this work except in compliance with the Licence.
#
# You may obtain a copy of the Licence at:
# https://joinup.ec.europa.eu/software/page/eupl
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Heisenberg dynamics of the quadratic chain Hamiltonian.

With r = (x_0, ..., x_{L-1}, p_0, ..., p_{L-1}) the bath Hamiltonian reads H_B = 1/2 r^T (X + P) r and the
Heisenberg picture operators evolve as r(y) = M(y) r with M(y) = exp(-sigma (X + P) y).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from logging import Logger

import numpy as np
from scipy.linalg import eigh, expm

from chaincert.exceptions import DimensionMismatch
from chaincert.spectral_chain import ChainMapping, MappingKind


def sigmaMatrix(L: int) -> np.ndarray:
    """sigma = [[0, -1], [1, 0]] in blocks of size L."""
    eye = np.eye(L)
    zero = np.zeros((L, L))
    return np.block([[zero, -eye], [eye, zero]])


def symplecticForm(L: int) -> np.ndarray:
    """Canonical form [[0, 1], [-1, 0]], [r_a, r_b] = i form_ab."""
    return -sigmaMatrix(L)


@dataclass(frozen=True, eq=False)
class SymplecticGenerator:
    """Generator -sigma (X + P) of the symplectic flow of a chain of L modes."""

    x_matrix: np.ndarray
    p_matrix: np.ndarray

    def __post_init__(self):
        if self.x_matrix.shape != self.p_matrix.shape or self.x_matrix.shape[0] != self.x_matrix.shape[1]:
            raise DimensionMismatch("X and P must be square matrices of the same size.")

    @classmethod
    def fromChain(cls, chain: ChainMapping, L: int = None) -> "SymplecticGenerator":
        """Generator of the first L modes of a chain (all modes by default)."""
        if L is not None:
            chain = chain.truncated(L)
        return cls(x_matrix=chain.X, p_matrix=chain.P)

    @property
    def L(self) -> int:
        return self.x_matrix.shape[0]

    @cached_property
    def hamiltonian(self) -> np.ndarray:
        """The quadratic form X + P."""
        L = self.L
        zero = np.zeros((L, L))
        return np.block([[self.x_matrix, zero], [zero, self.p_matrix]])

    @cached_property
    def matrix(self) -> np.ndarray:
        return -sigmaMatrix(self.L) @ self.hamiltonian


@dataclass(frozen=True, eq=False)
class HeisenbergCoefficients:
    """Row 0 of the Heisenberg propagator, x_0(y) = sum_k c_xx[k] x_k + c_xp[k] p_k."""

    y: float
    c_xx: np.ndarray
    c_xp: np.ndarray


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Two-point correlations gamma_ab = tr[r_a r_b rho] of the chain modes."""

    gamma: np.ndarray

    def __post_init__(self):
        n = self.gamma.shape[0]
        if self.gamma.shape != (n, n) or n % 2:
            raise DimensionMismatch(f"A correlation matrix must be 2L x 2L, got {self.gamma.shape}.")

    @property
    def L(self) -> int:
        return self.gamma.shape[0] // 2

    @property
    def xx(self) -> np.ndarray:
        return self.gamma[:self.L, :self.L]

    @property
    def xp(self) -> np.ndarray:
        return self.gamma[:self.L, self.L:]

    @property
    def px(self) -> np.ndarray:
        return self.gamma[self.L:, :self.L]

    @property
    def pp(self) -> np.ndarray:
        return self.gamma[self.L:, self.L:]

    @cached_property
    def norm(self) -> float:
        """Operator norm, gamma is Hermitian."""
        return float(np.max(np.abs(np.linalg.eigvalsh(self.gamma))))

    @classmethod
    def fromBlocks(cls, gamma_xx, gamma_xp, gamma_px, gamma_pp) -> "CorrelationMatrix":
        return cls(gamma=np.block([[gamma_xx, gamma_xp], [gamma_px, gamma_pp]]).astype(complex))


class BoundCase(str, Enum):
    """Regime of the spatial truncation bound."""

    XequalsP = "XequalsP"
    BothPositive = "BothPositive"
    General = "General"


@dataclass(frozen=True)
class BoundConstants:
    """Constants entering the chain-length truncation bound.

    c bounds ||P_L X_L||^(1/2), c_prime bounds max(||X||, ||P||). c_computed keeps the numerically
    evaluated norm next to the (possibly analytic) value used.
    """

    c: float
    c_prime: float
    case: BoundCase
    p_is_identity: bool
    c_computed: float


def symplecticExponential(*, generator: SymplecticGenerator, y: float) -> np.ndarray:
    """M(y) = exp(-sigma H_B y) by Pade scaling and squaring.

    Parameters
    ----------
    generator : SymplecticGenerator
        Chain generator.
    y : float
        Time.

    Returns
    -------
    : np.ndarray
        Real 2L x 2L symplectic matrix.
    """
    if not np.isfinite(y):
        raise ValueError(f"Time y ({y}) should be finite.")
    return expm(generator.matrix * y)


def heisenbergRow(*, generator: SymplecticGenerator, y: float) -> HeisenbergCoefficients:
    """Coefficients of x_0(y) in the Schroedinger picture operators x_k, p_k."""
    M = symplecticExponential(generator=generator, y=y)
    L = generator.L
    return HeisenbergCoefficients(y=float(y), c_xx=M[0, :L].copy(), c_xp=M[0, L:].copy())


def propagateGamma(*, gamma0: CorrelationMatrix, generator: SymplecticGenerator, y: float) -> CorrelationMatrix:
    """gamma(y) = M(y) gamma0 M(y)^T.

    Raises
    ------
    DimensionMismatch
        gamma0 and generator belong to chains of different length.
    """
    if gamma0.L != generator.L:
        raise DimensionMismatch(f"gamma0 has {gamma0.L} modes but the generator has {generator.L}.")
    M = symplecticExponential(generator=generator, y=y)
    return CorrelationMatrix(gamma=M @ gamma0.gamma @ M.T)


def propagateGammaBlocks(*, gamma0: CorrelationMatrix, generator: SymplecticGenerator,
                         y: float) -> CorrelationMatrix:
    """Block-wise form of propagateGamma, gamma_rs(y) = sum_ab c_ra gamma_ab c_sb^T."""
    if gamma0.L != generator.L:
        raise DimensionMismatch(f"gamma0 has {gamma0.L} modes but the generator has {generator.L}.")
    M = symplecticExponential(generator=generator, y=y)
    L = generator.L
    c = {('x', 'x'): M[:L, :L], ('x', 'p'): M[:L, L:], ('p', 'x'): M[L:, :L], ('p', 'p'): M[L:, L:]}
    g = {('x', 'x'): gamma0.xx, ('x', 'p'): gamma0.xp, ('p', 'x'): gamma0.px, ('p', 'p'): gamma0.pp}
    blocks = {}
    for r in 'xp':
        for s in 'xp':
            blocks[r, s] = sum(c[r, a] @ g[a, b] @ c[s, b].T for a in 'xp' for b in 'xp')
    return CorrelationMatrix.fromBlocks(blocks['x', 'x'], blocks['x', 'p'], blocks['p', 'x'], blocks['p', 'p'])


def gamma0Vacuum(L: int) -> CorrelationMatrix:
    """Chain vacuum, gamma_xx = gamma_pp = 1/2, gamma_xp = i/2, gamma_px = -i/2."""
    if L < 1:
        raise ValueError(f"Chain length L ({L}) should be at least 1.")
    eye = np.eye(L)
    return CorrelationMatrix.fromBlocks(eye / 2, 0.5j * eye, -0.5j * eye, eye / 2)


def gamma0ProductFock(occupations) -> CorrelationMatrix:
    """Product of Fock states |n_0> x |n_1> x ..., <x_i^2> = <p_i^2> = n_i + 1/2."""
    n = np.asarray(occupations, dtype=float)
    if n.ndim != 1 or len(n) < 1 or np.any(n < 0):
        raise ValueError("Occupations must be a non-empty list of non-negative numbers.")
    eye = np.eye(len(n))
    return CorrelationMatrix.fromBlocks(np.diag(n + 0.5), 0.5j * eye, -0.5j * eye, np.diag(n + 0.5))


def gamma0PhononRescaled(*, gamma_xx, gamma_xp, gamma_px, gamma_pp, omega_max: float) -> CorrelationMatrix:
    """Correlations in the rescaled phonon coordinates, x -> sqrt(w_max) x and p -> p / sqrt(w_max)."""
    return CorrelationMatrix.fromBlocks(omega_max * np.asarray(gamma_xx), np.asarray(gamma_xp),
                                        np.asarray(gamma_px), np.asarray(gamma_pp) / omega_max)


def _sqrtAndInverse(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    values, vectors = eigh(matrix)
    if np.any(values <= 0):
        raise ValueError("Matrix is not positive definite.")
    root = np.sqrt(values)
    return (vectors * root) @ vectors.T, (vectors / root) @ vectors.T


def gamma0Thermal(*, chain: ChainMapping, beta: float, L: int = None) -> CorrelationMatrix:
    """Thermal state of the chain at inverse temperature beta.

    The normal modes follow from P^(1/2) X P^(1/2) = V diag(W^2) V^T. Each mode carries the occupation
    1/(exp(beta W) - 1), the result is rotated back to the chain coordinates.

    Parameters
    ----------
    chain : ChainMapping
        Chain with X, P > 0.
    beta : float
        Inverse temperature, np.inf gives the ground state.
    L : int
        Number of modes, all chain modes by default.

    Returns
    -------
    : CorrelationMatrix
        Thermal correlation matrix.
    """
    if not beta > 0:
        raise ValueError(f"Inverse temperature beta ({beta}) should be positive.")
    if L is not None:
        chain = chain.truncated(L)
    X, P = chain.X, chain.P
    p_half, p_half_inv = _sqrtAndInverse(P)
    omega_sq, V = eigh(p_half @ X @ p_half)
    if np.any(omega_sq <= 0):
        raise ValueError("X is not positive definite, the chain has no thermal state.")
    omega = np.sqrt(omega_sq)
    with np.errstate(over='ignore'):
        occupation = 1.0 / np.expm1(beta * omega)
    gamma_xx = p_half @ (V * ((occupation + 0.5) / omega)) @ V.T @ p_half
    gamma_pp = p_half_inv @ (V * ((occupation + 0.5) * omega)) @ V.T @ p_half_inv
    eye = np.eye(chain.length)
    return CorrelationMatrix.fromBlocks(gamma_xx, 0.5j * eye, -0.5j * eye, gamma_pp)


def boundConstants(*, chain: ChainMapping, L: int = None, analytic: bool = True,
                   logger: Logger = None) -> BoundConstants:
    """Constants c, c_prime and the bound regime of a chain mapping.

    Parameters
    ----------
    chain : ChainMapping
        Chain mapping.
    L : int
        Truncation length, all chain modes by default.
    analytic : bool
        Use c = w_max, which bounds ||P_L X_L||^(1/2) for every chain mapping.
    logger : Logger
        Logger handler.

    Returns
    -------
    : BoundConstants
        The constants.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    sub = chain.truncated(L if L is not None else chain.length)
    c_computed = float(np.sqrt(np.linalg.norm(sub.P @ sub.X, 2)))
    if analytic and c_computed <= chain.omega_max * (1 + 1e-10):
        c = float(chain.omega_max)
    else:
        if analytic:
            logger.warning(f"Computed ||P_L X_L||^(1/2) = {c_computed} exceeds w_max, using the computed value.")
        c = float(np.nextafter(c_computed, np.inf))

    if chain.kind == MappingKind.particle:
        case = BoundCase.XequalsP
    elif chain.massive:
        case = BoundCase.BothPositive
    else:
        case = BoundCase.General
    return BoundConstants(c=c, c_prime=float(chain.omega_max), case=case, p_is_identity=chain.p_is_identity,
                          c_computed=c_computed)


def symplecticNorm(M: np.ndarray) -> float:
    """Plain spectral norm of a propagator."""
    return float(np.linalg.norm(M, 2))


def energyNorm(*, M: np.ndarray, generator: SymplecticGenerator) -> float:
    """||H^(1/2) M H^(-1/2)|| with H = X + P > 0.

    The flow of a positive quadratic Hamiltonian is an isometry in this norm; the plain spectral norm
    exceeds one as soon as X and P differ.
    """
    h_half, h_half_inv = _sqrtAndInverse(generator.hamiltonian)
    return float(np.linalg.norm(h_half @ M @ h_half_inv, 2))
