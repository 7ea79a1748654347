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
"""Spectral densities and their chain mappings.

A bosonic bath with spectral density J(w) is mapped onto a semi-infinite nearest-neighbour chain

    H_B = 1/2 sum_ij [x_i X_ij x_j + p_i P_ij p_j],    V = h x_0,

where X and P are tridiagonal. The particle mapping gives X = P, the phonon mapping gives P = w_max * 1.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from enum import Enum
from logging import Logger
from typing import Optional

import numpy as np
import pandas as pd
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.linalg import eigvalsh_tridiagonal
from scipy.special import roots_jacobi, roots_legendre

from chaincert.exceptions import GridTooCoarse, NonMonotoneDispersion, QuadratureUnstable


class DensityKind(str, Enum):
    """Enum for supported spectral density representations."""

    power_law = "power_law"
    tabulated = "tabulated"


class MappingKind(str, Enum):
    """Enum for chain mappings."""

    particle = "particle"
    phonon = "phonon"


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    """Power-law or tabulated spectral density J(w) with support [omega_min, omega_max]."""

    kind: DensityKind
    omega_min: float
    omega_max: float
    alpha: float = 0.0
    s: float = 1.0
    omega_c: float = 1.0
    omega_grid: Optional[np.ndarray] = field(default=None, repr=False)
    j_values: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == DensityKind.power_law:
            if self.s <= 0:
                raise ValueError(f"The exponent s ({self.s}) should be positive.")
            if self.omega_c <= 0:
                raise ValueError(f"The cutoff frequency omega_c ({self.omega_c}) should be positive.")
            if self.alpha < 0:
                raise ValueError(f"The coupling alpha ({self.alpha}) should not be negative.")
        else:
            if self.omega_grid is None or self.j_values is None:
                raise ValueError("A tabulated spectral density needs omega_grid and j_values.")
            if len(self.omega_grid) < 3:
                raise GridTooCoarse(f"At least 3 samples are needed, got {len(self.omega_grid)}.")
            if np.any(np.diff(self.omega_grid) <= 0):
                raise ValueError("The frequency grid should be strictly increasing.")
            if np.any(self.j_values < 0):
                raise ValueError("J(w) should not be negative on its support.")
        if not (0 <= self.omega_min < self.omega_max < np.inf):
            raise ValueError(f"Invalid support [{self.omega_min}, {self.omega_max}].")

    @property
    def massive(self) -> bool:
        """True if the support is bounded away from zero."""
        return self.omega_min > 0

    @property
    def supportBounds(self) -> tuple[float, float]:
        return self.omega_min, self.omega_max

    @property
    def breakpoints(self) -> np.ndarray:
        """Panel boundaries used by composite quadratures."""
        if self.kind == DensityKind.power_law:
            return np.array([self.omega_min, self.omega_max])
        return np.asarray(self.omega_grid, dtype=float)

    def __call__(self, omega) -> np.ndarray:
        """Evaluate J on an array of frequencies, zero outside the support."""
        omega = np.asarray(omega, dtype=float)
        inside = (omega >= self.omega_min) & (omega <= self.omega_max)
        if self.kind == DensityKind.power_law:
            values = np.pi * self.alpha * self.omega_c ** (1 - self.s) * np.abs(omega) ** self.s
        else:
            values = np.nan_to_num(self._interpolant(omega), nan=0.0)
            values = np.clip(values, 0.0, None)
        return np.where(inside, values, 0.0)

    @cached_property
    def _interpolant(self) -> PchipInterpolator:
        return PchipInterpolator(self.omega_grid, self.j_values, extrapolate=False)


@dataclass(frozen=True, eq=False)
class DispersionSpec:
    """Dispersion g(k) and coupling h(k) sampled on a common k grid."""

    k: np.ndarray
    g: np.ndarray
    h: np.ndarray


@dataclass(frozen=True, eq=False)
class MappingConstants:
    """Norm constants mu0 (particle) and mu1 (phonon) of the chain coupling."""

    mu0: float
    mu1: float


@dataclass(frozen=True, eq=False)
class ChainMapping:
    """Chain-mapped bath of L modes.

    X is stored by its diagonal and first off-diagonal. For the phonon mapping P is the scalar
    identity p_scalar * 1 and p_diag / p_offdiag are None. The boundary elements couple the last kept
    mode L-1 to the first discarded mode L.
    """

    kind: MappingKind
    x_diag: np.ndarray
    x_offdiag: np.ndarray
    x_boundary: float
    h_coeff: float
    omega_min: float
    omega_max: float
    p_diag: Optional[np.ndarray] = None
    p_offdiag: Optional[np.ndarray] = None
    p_boundary: float = 0.0
    p_scalar: Optional[float] = None

    def __post_init__(self):
        if len(self.x_diag) < 1:
            raise ValueError("A chain needs at least one mode.")
        if len(self.x_offdiag) != len(self.x_diag) - 1:
            raise ValueError("X off-diagonal must have length L-1.")
        if self.p_scalar is None:
            if self.p_diag is None or self.p_offdiag is None:
                raise ValueError("P needs either a scalar or tridiagonal entries.")
            if len(self.p_diag) != len(self.x_diag) or len(self.p_offdiag) != len(self.x_offdiag):
                raise ValueError("P and X must have the same length.")
        elif self.p_boundary != 0.0:
            raise ValueError("A scalar P has no boundary coupling.")

    @property
    def length(self) -> int:
        return len(self.x_diag)

    @property
    def p_is_identity(self) -> bool:
        return self.p_scalar is not None

    @property
    def massive(self) -> bool:
        return self.omega_min > 0

    @property
    def X(self) -> np.ndarray:
        """Dense X matrix."""
        return np.diag(self.x_diag) + np.diag(self.x_offdiag, 1) + np.diag(self.x_offdiag, -1)

    @property
    def P(self) -> np.ndarray:
        """Dense P matrix."""
        if self.p_is_identity:
            return self.p_scalar * np.eye(self.length)
        return np.diag(self.p_diag) + np.diag(self.p_offdiag, 1) + np.diag(self.p_offdiag, -1)

    def xEigenvalues(self) -> np.ndarray:
        if self.length == 1:
            return np.array(self.x_diag, dtype=float)
        return eigvalsh_tridiagonal(self.x_diag, self.x_offdiag)

    def pNorm(self) -> float:
        """Spectral norm of P."""
        if self.p_is_identity:
            return abs(self.p_scalar)
        if self.length == 1:
            return float(abs(self.p_diag[0]))
        return float(np.max(np.abs(eigvalsh_tridiagonal(self.p_diag, self.p_offdiag))))

    def truncated(self, L: int) -> "ChainMapping":
        """Principal sub-chain of the first L modes, boundary couplings taken from this chain."""
        if not 1 <= L <= self.length:
            raise ValueError(f"Cannot truncate a chain of length {self.length} to {L} modes.")
        x_boundary = self.x_offdiag[L - 1] if L < self.length else self.x_boundary
        kwargs = dict(kind=self.kind, x_diag=self.x_diag[:L].copy(), x_offdiag=self.x_offdiag[:L - 1].copy(),
                      x_boundary=float(x_boundary), h_coeff=self.h_coeff, omega_min=self.omega_min,
                      omega_max=self.omega_max)
        if self.p_is_identity:
            return ChainMapping(p_scalar=self.p_scalar, **kwargs)
        p_boundary = self.p_offdiag[L - 1] if L < self.length else self.p_boundary
        return ChainMapping(p_diag=self.p_diag[:L].copy(), p_offdiag=self.p_offdiag[:L - 1].copy(),
                            p_boundary=float(p_boundary), **kwargs)


def powerLawDensity(*, alpha: float, s: float, omega_c: float) -> SpectralDensity:
    """Power-law density J(w) = pi alpha omega_c^(1-s) w^s on [0, omega_c]."""
    return SpectralDensity(kind=DensityKind.power_law, omega_min=0.0, omega_max=float(omega_c),
                           alpha=float(alpha), s=float(s), omega_c=float(omega_c))


def tabulatedDensity(*, omega: np.ndarray, j_values: np.ndarray) -> SpectralDensity:
    """Tabulated density interpolated monotonically between the samples."""
    omega = np.asarray(omega, dtype=float)
    j_values = np.asarray(j_values, dtype=float)
    if len(omega) < 3:
        raise GridTooCoarse(f"At least 3 samples are needed, got {len(omega)}.")
    return SpectralDensity(kind=DensityKind.tabulated, omega_min=float(omega[0]), omega_max=float(omega[-1]),
                           omega_grid=omega, j_values=j_values)


def spectralDensityFromDispersion(*, dispersion: DispersionSpec, logger: Logger = None) -> SpectralDensity:
    """Tabulate J(w) = pi h(g^-1(w))^2 |d g^-1 / dw| from a scalar dispersion relation.

    g and h are interpolated with monotone cubic splines; the inverse derivative is 1/g'(k) of the
    interpolant evaluated at the grid nodes w_i = g(k_i).

    Parameters
    ----------
    dispersion : DispersionSpec
        Sampled g(k) and h(k).
    logger : Logger
        Logger handler.

    Returns
    -------
    : SpectralDensity
        Tabulated spectral density on the nodes g(k_i), sorted by frequency.

    Raises
    ------
    GridTooCoarse
        Fewer than 3 samples.
    NonMonotoneDispersion
        g is not strictly monotone.
    """
    if logger is None:
        logger = logging.getLogger(__name__)

    k = np.asarray(dispersion.k, dtype=float)
    g = np.asarray(dispersion.g, dtype=float)
    h = np.asarray(dispersion.h, dtype=float)
    if not (len(k) == len(g) == len(h)):
        raise ValueError("k, g and h must be sampled on the same grid.")
    if len(k) < 3:
        raise GridTooCoarse(f"At least 3 samples are needed, got {len(k)}.")
    if np.any(np.diff(k) <= 0):
        raise ValueError("The k grid should be strictly increasing.")
    dg = np.diff(g)
    if not (np.all(dg > 0) or np.all(dg < 0)):
        raise NonMonotoneDispersion("The dispersion g(k) is not strictly monotone on its grid.")

    slope = PchipInterpolator(k, g).derivative()(k)
    with np.errstate(divide='ignore', invalid='ignore'):
        j_values = np.pi * h ** 2 / np.abs(slope)
    j_values[h == 0] = 0.0
    # stationary endpoints of g take the neighbouring value
    bad = ~np.isfinite(j_values)
    if np.any(bad):
        logger.warning(f"Dispersion has {int(bad.sum())} stationary node(s), using neighbouring values.")
        good = np.flatnonzero(~bad)
        j_values[bad] = j_values[good[np.abs(good[:, None] - np.flatnonzero(bad)[None, :]).argmin(axis=0)]]

    order = np.argsort(g)
    return tabulatedDensity(omega=g[order], j_values=j_values[order])


def _compositeGaussLegendre(func, breakpoints: np.ndarray, order: int = 8) -> float:
    """Integrate func panel-wise between consecutive breakpoints with an order-point Gauss-Legendre rule."""
    nodes, weights = _compositeNodes(breakpoints, order)
    return float(np.sum(weights * func(nodes)))


def _compositeNodes(breakpoints: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = roots_legendre(order)
    a = np.asarray(breakpoints[:-1])[:, None]
    b = np.asarray(breakpoints[1:])[:, None]
    nodes = 0.5 * (b - a) * t[None, :] + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def mappingConstants(*, density: SpectralDensity, closed_form: bool = True) -> MappingConstants:
    """Compute mu0 = sqrt(2/pi int J) and mu1 = sqrt(1/(pi w_max) int J(sqrt(w)) dw).

    Parameters
    ----------
    density : SpectralDensity
        The spectral density.
    closed_form : bool
        Use the analytic result for power laws. Otherwise power laws are integrated by adaptive
        Gauss-Kronrod quadrature (relative tolerance 1e-12).

    Returns
    -------
    : MappingConstants
        mu0 and mu1.
    """
    w_max = density.omega_max
    if density.kind == DensityKind.power_law:
        if closed_form:
            return MappingConstants(mu0=density.omega_c * np.sqrt(2 * density.alpha / (density.s + 1)),
                                    mu1=density.omega_c * np.sqrt(2 * density.alpha / (density.s + 2)))
        int0, _ = quad(density, density.omega_min, w_max, epsabs=0.0, epsrel=1e-12, limit=200)
        int1, _ = quad(lambda x: density(np.sqrt(x)), density.omega_min ** 2, w_max ** 2,
                       epsabs=0.0, epsrel=1e-12, limit=200)
    else:
        # the interpolant is piecewise cubic, so these rules are exact per panel
        breakpoints = density.breakpoints
        int0 = _compositeGaussLegendre(density, breakpoints, order=4)
        # int J(sqrt(x)) dx over [w_min^2, w_max^2] equals 2 int w J(w) dw
        int1 = 2.0 * _compositeGaussLegendre(lambda w: w * density(w), breakpoints, order=4)
    return MappingConstants(mu0=float(np.sqrt(2.0 / np.pi * int0)), mu1=float(np.sqrt(int1 / (np.pi * w_max))))


def _checkPowerLaw(density: SpectralDensity):
    if density.kind != DensityKind.power_law:
        raise ValueError("Closed-form chain coefficients exist for power-law spectral densities only, "
                         "use stieltjesRecurrenceOracle for tabulated densities.")


def particleChain(*, density: SpectralDensity, L: int) -> ChainMapping:
    """Closed-form particle mapping of a power-law density, X = P.

    Parameters
    ----------
    density : SpectralDensity
        Power-law spectral density.
    L : int
        Number of chain modes.

    Returns
    -------
    : ChainMapping
        Chain of L modes with boundary couplings to mode L.
    """
    _checkPowerLaw(density)
    if L < 1:
        raise ValueError(f"Chain length L ({L}) should be at least 1.")
    s, w_c = density.s, density.omega_c
    j = np.arange(L, dtype=float)
    diag = w_c / 2 * (1 + s ** 2 / ((s + 2 * j) * (2 + s + 2 * j)))
    off = w_c * (1 + j) * (1 + s + j) / ((s + 2 + 2 * j) * (3 + s + 2 * j)) * np.sqrt((3 + s + 2 * j) / (1 + s + 2 * j))
    return ChainMapping(kind=MappingKind.particle, x_diag=diag, x_offdiag=off[:-1], x_boundary=float(off[-1]),
                        p_diag=diag.copy(), p_offdiag=off[:-1].copy(), p_boundary=float(off[-1]),
                        h_coeff=float(w_c * np.sqrt(2 * density.alpha / (s + 1))),
                        omega_min=density.omega_min, omega_max=density.omega_max)


def phononChain(*, density: SpectralDensity, L: int) -> ChainMapping:
    """Closed-form phonon mapping of a power-law density, P = omega_c * 1."""
    _checkPowerLaw(density)
    if L < 1:
        raise ValueError(f"Chain length L ({L}) should be at least 1.")
    s, w_c = density.s, density.omega_c
    j = np.arange(L, dtype=float)
    diag = w_c / 2 * (1 + s ** 2 / ((s + 4 * j) * (4 + s + 4 * j)))
    off = (2 * w_c * (1 + j) * (2 + s + 2 * j) / ((s + 4 + 4 * j) * (6 + s + 4 * j))
           * np.sqrt((6 + s + 4 * j) / (2 + s + 4 * j)))
    return ChainMapping(kind=MappingKind.phonon, x_diag=diag, x_offdiag=off[:-1], x_boundary=float(off[-1]),
                        p_scalar=float(w_c), h_coeff=float(w_c * np.sqrt(2 * density.alpha / (s + 2))),
                        omega_min=density.omega_min, omega_max=density.omega_max)


def _measureQuadrature(density: SpectralDensity, kind: MappingKind, n_nodes: int,
                       panel_order: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the measure J(x)dx/pi (particle) or J(sqrt x)dx/pi (phonon)."""
    if density.kind == DensityKind.power_law:
        # J(x)/pi = alpha w_c^(1-s) x^s on [0, w_c]; J(sqrt x)/pi = alpha w_c^(1-s) x^(s/2) on [0, w_c^2]
        b = density.s if kind == MappingKind.particle else density.s / 2
        upper = density.omega_c if kind == MappingKind.particle else density.omega_c ** 2
        t, w = roots_jacobi(n_nodes, 0.0, b)
        nodes = upper * (1 + t) / 2
        weights = density.alpha * density.omega_c ** (1 - density.s) * (upper / 2) ** (b + 1) * w
        return nodes, weights
    breakpoints = density.breakpoints
    if kind == MappingKind.particle:
        nodes, weights = _compositeNodes(breakpoints, panel_order)
        return nodes, weights * density(nodes) / np.pi
    nodes, weights = _compositeNodes(breakpoints ** 2, panel_order)
    return nodes, weights * density(np.sqrt(nodes)) / np.pi


def stieltjesRecurrenceOracle(*, density: SpectralDensity, L: int, kind: MappingKind = MappingKind.particle,
                              n_nodes: Optional[int] = None, logger: Logger = None) -> ChainMapping:
    """Chain coefficients from the discretized Stieltjes procedure.

    The measure is discretized by a Gauss-Jacobi rule for power laws and by composite Gauss-Legendre
    panels between the samples of tabulated densities. Orthonormal polynomials are generated by the
    three-term recurrence, their Gram matrix on the discrete measure is checked afterwards.

    Parameters
    ----------
    density : SpectralDensity
        Spectral density.
    L : int
        Number of chain modes.
    kind : MappingKind
        Particle (measure J(x)dx/pi) or phonon (measure J(sqrt x)dx/pi, rescaled by 1/w_max).
    n_nodes : int
        Size of the Gauss-Jacobi rule, default 4L + 100.
    logger : Logger
        Logger handler.

    Returns
    -------
    : ChainMapping
        Chain of L modes including the boundary coupling.

    Raises
    ------
    QuadratureUnstable
        Orthogonality loss above 1e-8.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    if L < 1:
        raise ValueError(f"Chain length L ({L}) should be at least 1.")

    nodes, weights = _measureQuadrature(density, kind, n_nodes or 4 * L + 100)
    beta0 = float(np.sum(weights))
    if beta0 <= 0:
        raise QuadratureUnstable("The measure has zero mass.")

    a = np.zeros(L)
    b = np.zeros(L)
    polys = np.zeros((L + 1, len(nodes)))
    polys[0] = 1.0 / np.sqrt(beta0)
    previous = np.zeros(len(nodes))
    for n in range(L):
        a[n] = np.sum(weights * nodes * polys[n] ** 2)
        q = (nodes - a[n]) * polys[n] - (b[n - 1] if n > 0 else 0.0) * previous
        b[n] = np.sqrt(np.sum(weights * q ** 2))
        if not b[n] > 0:
            raise QuadratureUnstable(f"Recurrence broke down at step {n}.")
        previous = polys[n]
        polys[n + 1] = q / b[n]

    gram = (polys * weights) @ polys.T
    loss = float(np.max(np.abs(gram - np.eye(L + 1))))
    logger.debug(f"Stieltjes procedure with {len(nodes)} nodes, orthogonality loss {loss:.3e}.")
    if loss > 1e-8:
        raise QuadratureUnstable(f"Orthogonality loss {loss:.3e} exceeds 1e-8, increase the quadrature size.")

    w_max = density.omega_max
    if kind == MappingKind.particle:
        return ChainMapping(kind=kind, x_diag=a, x_offdiag=b[:-1], x_boundary=float(b[-1]),
                            p_diag=a.copy(), p_offdiag=b[:-1].copy(), p_boundary=float(b[-1]),
                            h_coeff=float(np.sqrt(2 * beta0)), omega_min=density.omega_min, omega_max=w_max)
    return ChainMapping(kind=kind, x_diag=a / w_max, x_offdiag=b[:-1] / w_max, x_boundary=float(b[-1] / w_max),
                        p_scalar=float(w_max), h_coeff=float(np.sqrt(beta0 / w_max)),
                        omega_min=density.omega_min, omega_max=w_max)


def chainFor(*, density: SpectralDensity, kind: MappingKind, L: int, quadrature_chain: bool = False) -> ChainMapping:
    """Closed forms for power laws, Stieltjes coefficients for tabulated densities or on request."""
    if quadrature_chain or density.kind == DensityKind.tabulated:
        return stieltjesRecurrenceOracle(density=density, L=L, kind=kind)
    if kind == MappingKind.particle:
        return particleChain(density=density, L=L)
    return phononChain(density=density, L=L)


def chainCoefficientsTable(*, chain: ChainMapping) -> pd.DataFrame:
    """Site-indexed chain coefficients, offdiag columns hold the coupling of site j to site j+1."""
    L = chain.length
    offdiag_x = np.append(chain.x_offdiag, chain.x_boundary)
    if chain.p_is_identity:
        diag_p = np.full(L, chain.p_scalar)
        offdiag_p = np.zeros(L)
    else:
        diag_p = chain.p_diag
        offdiag_p = np.append(chain.p_offdiag, chain.p_boundary)
    return pd.DataFrame({'site_index': np.arange(L), 'diag_X': chain.x_diag, 'offdiag_X': offdiag_x,
                         'diag_P': diag_p, 'offdiag_P': offdiag_p})
