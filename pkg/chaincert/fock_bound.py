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
"""Fock space truncation error and total certificates.

The Fock truncation error of a system observable O obeys

    Delta_m(t)^2 <= 4 ||O||^2 (tr[(1 - 1_m) rho_0] + 2 int_0^t sqrt(eps_m(x)) dx),

where eps_m(x) = ||(h x W(x)) phi(x)||^2 with phi(x) = exp(i x H_B^m) exp(-i x H_m) psi_0 and
W(x) = x_0(x) - exp(i x H_B^m) x_0^m exp(-i x H_B^m). The part of W(x) phi inside the truncated space is
evaluated with the Heisenberg coefficients of x_0(x), the part leaving it through the corner corrections.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from logging import Logger
from typing import List, Optional, Union

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, Field
from scipy.linalg import eigh_tridiagonal, expm

from chaincert.exceptions import DimensionMismatch, NoConvergence, UnsupportedState
from chaincert.fock_space import (DEFAULT_DIMENSION_CAP, SparseHamiltonian, SpinSystem, TruncationSpec,
                                  buildBathHamiltonian, buildTotalHamiltonian, checkDimension,
                                  embedBathHamiltonian, productState, siteEmbedding, siteOperators,
                                  systemEmbedding)
from chaincert.quadratic_dynamics import (SymplecticGenerator, gamma0ProductFock, gamma0Thermal, gamma0Vacuum,
                                          heisenbergRow)
from chaincert.spatial_bound import SpatialBoundReport, generalBound, spatialBoundInput
from chaincert.spectral_chain import ChainMapping, MappingKind, SpectralDensity, chainFor


class BathStateKind(str, Enum):
    """Enum for supported initial bath states."""

    vacuum = "vacuum"
    fock = "fock"
    thermal = "thermal"


@dataclass(frozen=True)
class BathState:
    """Initial state of the chain: vacuum, product Fock state or thermal state at inverse temperature beta."""

    kind: BathStateKind = BathStateKind.vacuum
    occupations: Optional[tuple] = None
    beta: Optional[float] = None

    def __post_init__(self):
        if self.kind == BathStateKind.fock and self.occupations is None:
            raise ValueError("A Fock state needs occupations.")
        if self.kind == BathStateKind.thermal and not (self.beta is not None and self.beta > 0):
            raise ValueError("A thermal state needs a positive inverse temperature beta.")

    def siteOccupations(self, L: int) -> list:
        """Occupation numbers of the first L sites of a product state."""
        if self.kind == BathStateKind.thermal:
            raise UnsupportedState("Thermal chain states are not pure product states.")
        occupations = list(self.occupations or [])[:L]
        return occupations + [0] * (L - len(occupations))


class EpsilonCurve(BaseModel):
    """Fock truncation error eps_m(x) on a time grid."""

    x: List[float] = Field(title="Time grid.", description="Grid x_j, starting at 0.")
    epsilon: List[float] = Field(title="Fock truncation error.", description="eps_m(x_j), clipped at 0.")
    L: int = Field(title="Chain length.", description="")
    cutoffs: List[int] = Field(title="Fock cutoffs.", description="Per-site cutoffs m_i.")
    mapping: str = Field(title="Chain mapping.", description="particle or phonon.")
    parameters: dict = Field(title="Model parameters.", description="", default={})


class FockBoundReport(BaseModel):
    """Integrated Fock truncation bound at one time."""

    t: float = Field(title="Time.", description="")
    tail_weight: float = Field(title="Tail weight.", description="tr[(1 - 1_m) rho_0].")
    integral: float = Field(title="Integral.", description="Composite Simpson value of int_0^t sqrt(eps).")
    quadrature_error: float = Field(title="Quadrature error.", description="Richardson estimate added to the "
                                                                          "integral.")
    quadrature_nodes: int = Field(title="Quadrature nodes.", description="")
    fock_bound: float = Field(title="Fock bound.", description="Upper bound of Delta_m(t).")


class CertificateReport(BaseModel):
    """Total certificate Delta(t, L) + Delta_m(t) at one time."""

    t: float = Field(title="Time.", description="")
    L: int = Field(title="Chain length.", description="")
    cutoffs: List[int] = Field(title="Fock cutoffs.", description="")
    spatial: SpatialBoundReport = Field(title="Chain-length bound.", description="")
    epsilon: float = Field(title="Fock truncation error at t.", description="")
    tail_weight: float = Field(title="Tail weight.", description="")
    fock_bound: float = Field(title="Fock bound.", description="")
    quadrature_error: float = Field(title="Quadrature error.", description="")
    quadrature_nodes: int = Field(title="Quadrature nodes.", description="")
    total: float = Field(title="Total bound.", description="spatial.delta_bound + fock_bound.")


def _matrixOf(hamiltonian) -> sp.spmatrix:
    return hamiltonian.matrix if isinstance(hamiltonian, SparseHamiltonian) else hamiltonian


def _lanczos(matrix, v0: np.ndarray, krylov_dim: int):
    """Lanczos basis with full reorthogonalization, returns (basis, alpha, beta, exhausted)."""
    n = v0.shape[0]
    k = min(krylov_dim, n - 1)
    basis = np.zeros((k + 1, n), dtype=complex)
    alpha = np.zeros(k + 1)
    beta = np.zeros(k)
    basis[0] = v0
    for j in range(k + 1):
        w = matrix @ basis[j]
        scale = np.linalg.norm(w)
        alpha[j] = np.vdot(basis[j], w).real
        if j == k:
            break
        w = w - alpha[j] * basis[j]
        if j > 0:
            w -= beta[j - 1] * basis[j - 1]
        w -= basis[:j + 1].T @ (basis[:j + 1].conj() @ w)
        b = np.linalg.norm(w)
        if b <= 1e-12 * max(scale, np.finfo(float).tiny):
            # invariant subspace, the projection is exact
            return basis[:j + 1], alpha[:j + 1], beta[:j], True
        beta[j] = b
        basis[j + 1] = w / b
    return basis, alpha, beta, k + 1 >= n


def _tridiagonalExp(alpha: np.ndarray, beta: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i tau T) e_0 for the symmetric tridiagonal T(alpha, beta)."""
    if len(alpha) == 1:
        return np.array([np.exp(-1j * tau * alpha[0])])
    theta, S = eigh_tridiagonal(alpha, beta)
    return S @ (np.exp(-1j * tau * theta) * S[0, :])


def propagate(*, hamiltonian, state: np.ndarray, t: float, tol: float = 1e-10, krylov_dim: int = 30,
              logger: Logger = None) -> np.ndarray:
    """exp(-i H t) psi by adaptive short-iterative Lanczos steps.

    Every step compares the Krylov approximations of dimension k and k + 1 and keeps the latter; the
    step is shrunk until the difference is below tol ||psi|| times the fraction of t it covers.

    Parameters
    ----------
    hamiltonian : SparseHamiltonian or sparse matrix
        Hermitian Hamiltonian.
    state : np.ndarray
        Initial vector.
    t : float
        Time, negative values propagate backwards.
    tol : float
        Error target relative to ||psi||.
    krylov_dim : int
        Krylov subspace dimension.
    logger : Logger
        Logger handler.

    Returns
    -------
    : np.ndarray
        Propagated vector.

    Raises
    ------
    NoConvergence
        Step size fell below 1e-12 |t|.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    matrix = _matrixOf(hamiltonian)
    psi = np.asarray(state, dtype=complex)
    if matrix.shape[0] != psi.shape[0]:
        raise DimensionMismatch(f"State of size {psi.shape[0]} does not fit a Hamiltonian of size {matrix.shape[0]}.")
    if not tol > 0:
        raise ValueError(f"Tolerance ({tol}) should be positive.")
    norm0 = np.linalg.norm(psi)
    if t == 0 or norm0 == 0:
        return psi.copy()

    total = abs(float(t))
    direction = np.sign(t)
    min_step = total * 1e-12
    remaining = total
    step = total
    n_steps = 0
    while remaining > 0:
        beta0 = np.linalg.norm(psi)
        basis, alpha, beta, exhausted = _lanczos(matrix, psi / beta0, krylov_dim)
        step = min(step, remaining)
        while True:
            coefficients = _tridiagonalExp(alpha, beta, direction * step)
            if exhausted:
                break
            coarse = _tridiagonalExp(alpha[:-1], beta[:-1], direction * step)
            error = beta0 * np.linalg.norm(coefficients[:-1] - coarse) + beta0 * abs(coefficients[-1])
            if error <= tol * norm0 * step / total:
                break
            step *= 0.5
            if step < min_step:
                raise NoConvergence(f"Step size {step} underflows the minimum step {min_step} at "
                                    f"{total - remaining} of {total}.")
        psi = beta0 * (basis.T @ coefficients)
        remaining = remaining - step if step < remaining else 0.0
        n_steps += 1
        step = 2 * step
    logger.debug(f"Propagation over t = {t} took {n_steps} Krylov steps.")
    return psi


@dataclass(frozen=True, eq=False)
class FockModel:
    """Operators and states shared by all evaluations of eps_m(x)."""

    system: SpinSystem
    chain: ChainMapping
    trunc: TruncationSpec
    psi0: np.ndarray
    total: SparseHamiltonian
    bath: SparseHamiltonian
    generator: SymplecticGenerator
    x_sites: list = field(repr=False)
    p_sites: list = field(repr=False)
    h_system: sp.csr_matrix = field(repr=False)
    tol: float = 1e-10
    krylov_dim: int = 30

    def topLevelWeight(self, vector: np.ndarray, site: int) -> float:
        """||(1 x |m_k><m_k|_k) vector||^2."""
        shaped = vector.reshape((self.system.dim_s,) + self.trunc.dims)
        top = np.take(shaped, self.trunc.cutoffs[site], axis=site + 1)
        return float(np.sum(np.abs(top) ** 2))


def fockModel(*, system: SpinSystem, chain: ChainMapping, trunc: TruncationSpec, psi0: np.ndarray,
              tol: float = 1e-10, krylov_dim: int = 30, dimension_cap: int = DEFAULT_DIMENSION_CAP,
              logger: Logger = None) -> FockModel:
    """Assemble the truncated Hamiltonians and site operators for a chain of trunc.L modes.

    Raises
    ------
    DimensionOverflow
        Total dimension above dimension_cap.
    """
    total = buildTotalHamiltonian(system=system, chain=chain, trunc=trunc, dimension_cap=dimension_cap,
                                  logger=logger)
    bath = embedBathHamiltonian(bath=buildBathHamiltonian(chain=chain, trunc=trunc, dim_s=system.dim_s,
                                                          dimension_cap=dimension_cap, logger=logger),
                                dim_s=system.dim_s)
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape[0] != total.dimension:
        raise DimensionMismatch(f"Initial state of size {psi0.shape[0]} does not fit dimension {total.dimension}.")
    eye_s = np.eye(system.dim_s)
    x_sites, p_sites = [], []
    for i, m in enumerate(trunc.cutoffs):
        ops = siteOperators(m)
        x_sites.append(systemEmbedding(system_operator=eye_s,
                                       bath_operator=siteEmbedding(operator=ops.x, site=i, dims=trunc.dims)))
        p_sites.append(systemEmbedding(system_operator=eye_s,
                                       bath_operator=siteEmbedding(operator=ops.p, site=i, dims=trunc.dims)))
    h_system = systemEmbedding(system_operator=chain.h_coeff * system.a_s,
                               bath_operator=sp.identity(trunc.bath_dimension))
    return FockModel(system=system, chain=chain, trunc=trunc, psi0=psi0, total=total, bath=bath,
                     generator=SymplecticGenerator.fromChain(chain, trunc.L), x_sites=x_sites, p_sites=p_sites,
                     h_system=h_system, tol=tol, krylov_dim=krylov_dim)


def _epsilonFromState(model: FockModel, x: float, psi: np.ndarray) -> float:
    if x == 0:
        phi = psi
        chi = model.x_sites[0] @ psi
    else:
        phi = propagate(hamiltonian=model.bath, state=psi, t=-x, tol=model.tol, krylov_dim=model.krylov_dim)
        chi = propagate(hamiltonian=model.bath, state=model.x_sites[0] @ psi, t=-x, tol=model.tol,
                        krylov_dim=model.krylov_dim)
    row = heisenbergRow(generator=model.generator, y=x)

    inside = -chi
    for k in range(model.trunc.L):
        if row.c_xx[k] != 0:
            inside = inside + row.c_xx[k] * (model.x_sites[k] @ phi)
        if row.c_xp[k] != 0:
            inside = inside + row.c_xp[k] * (model.p_sites[k] @ phi)
    h_inside = model.h_system @ inside
    term1 = float(np.vdot(h_inside, h_inside).real)

    h_phi = model.h_system @ phi
    term2 = 0.0
    for k, m in enumerate(model.trunc.cutoffs):
        weight = row.c_xx[k] ** 2 + row.c_xp[k] ** 2
        if weight != 0:
            term2 += weight * (m + 1) / 2 * model.topLevelWeight(h_phi, k)
    return max(term1 + term2, 0.0)


def epsilonM(*, x: float, model: FockModel) -> float:
    """Fock truncation error eps_m(x).

    Parameters
    ----------
    x : float
        Time.
    model : FockModel
        Truncated model with initial state.

    Returns
    -------
    : float
        eps_m(x) >= 0.
    """
    psi = propagate(hamiltonian=model.total, state=model.psi0, t=x, tol=model.tol, krylov_dim=model.krylov_dim)
    return _epsilonFromState(model, x, psi)


def epsilonCurve(*, grid, model: FockModel, threads: int = 1, parameters: dict = None,
                 logger: Logger = None) -> EpsilonCurve:
    """eps_m on a grid starting at 0.

    The state is propagated once along the grid, the remaining propagations of every grid point run
    concurrently. Results are ordered like the grid for any number of threads.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0 or np.any(np.diff(grid) <= 0) or grid[0] < 0:
        raise ValueError("The grid should be non-empty, non-negative and strictly increasing.")

    op_start = time.time()
    states = []
    psi = model.psi0
    previous = 0.0
    span = grid[-1] if grid[-1] > 0 else 1.0
    for x in grid:
        dx = x - previous
        if dx > 0:
            # split the tolerance so the accumulated error stays below tol
            psi = propagate(hamiltonian=model.total, state=psi, t=dx, tol=model.tol * dx / span,
                            krylov_dim=model.krylov_dim)
        states.append(psi)
        previous = x
    logger.debug(f"Propagating the truncated model over {len(grid)} grid points took "
                 f"{(time.time() - op_start) * 1000} msecs.")

    op_start = time.time()
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        values = list(executor.map(lambda args: _epsilonFromState(model, *args), zip(grid, states)))
    logger.debug(f"Evaluating eps_m on {len(grid)} grid points took {(time.time() - op_start) * 1000} msecs.")
    return EpsilonCurve(x=grid.tolist(), epsilon=[float(v) for v in values], L=model.trunc.L,
                        cutoffs=list(model.trunc.cutoffs), mapping=model.chain.kind.value,
                        parameters=parameters or {})


def epsilonDense(*, x: float, system: SpinSystem, chain: ChainMapping, trunc: TruncationSpec,
                 psi0: np.ndarray, m_ref: int) -> float:
    """Literal dense evaluation of eps_m(x) = tr[h^2 exp(-ixH_B^m) W^2(x) exp(ixH_B^m) rho_m(x)].

    x_0(x) is evolved with the bath Hamiltonian of a reference space with cutoff m_ref on every site, the
    truncated space is embedded into it. For number conserving chains (particle mapping) the reference
    evolution is exact once m_ref exceeds the total number of bosons reachable, sum(m_i) + 1.
    """
    if m_ref <= max(trunc.cutoffs):
        raise ValueError(f"Reference cutoff {m_ref} should exceed the cutoffs {trunc.cutoffs}.")
    ref = TruncationSpec.uniform(trunc.L, m_ref)
    dim_s = system.dim_s
    eye_s = np.eye(dim_s)

    # isometry from the truncated into the reference space
    bath_index = np.ravel_multi_index(np.indices(trunc.dims).reshape(trunc.L, -1), ref.dims)
    rows = (np.arange(dim_s)[:, None] * ref.bath_dimension + bath_index[None, :]).ravel()
    n_small = dim_s * trunc.bath_dimension
    E = np.zeros((dim_s * ref.bath_dimension, n_small))
    E[rows, np.arange(n_small)] = 1.0

    h_total = buildTotalHamiltonian(system=system, chain=chain, trunc=trunc).matrix.toarray()
    h_bath = np.kron(eye_s, buildBathHamiltonian(chain=chain, trunc=trunc).matrix.toarray())
    h_bath_ref = np.kron(eye_s, buildBathHamiltonian(chain=chain, trunc=ref).matrix.toarray())

    psi_x = expm(-1j * x * h_total) @ np.asarray(psi0, dtype=complex)
    rho = np.outer(psi_x, psi_x.conj())
    u_bath = expm(1j * x * h_bath)
    sigma = E @ (u_bath @ rho @ u_bath.conj().T) @ E.T

    x0_small = np.kron(eye_s, siteEmbedding(operator=siteOperators(trunc.cutoffs[0]).x, site=0,
                                            dims=trunc.dims).toarray())
    x0_ref = np.kron(eye_s, siteEmbedding(operator=siteOperators(m_ref).x, site=0, dims=ref.dims).toarray())
    u_ref = expm(1j * x * h_bath_ref)
    W = u_ref @ x0_ref @ u_ref.conj().T - E @ (u_bath @ x0_small @ u_bath.conj().T) @ E.T
    h_sq = np.kron((chain.h_coeff * system.a_s) @ (chain.h_coeff * system.a_s), np.eye(ref.bath_dimension))
    return float(np.trace(h_sq @ W @ W @ sigma).real)


def integrationGrid(*, times, points_per_unit_time: int = 64) -> np.ndarray:
    """Uniform grid from 0 on which every time is a node with index divisible by 4.

    Parameters
    ----------
    times : array_like
        Output times j * dt (a single time is allowed).
    points_per_unit_time : int
        Minimal node density.

    Returns
    -------
    : np.ndarray
        Integration grid.
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValueError("Times should not be negative.")
    t_max = float(times.max())
    if t_max == 0:
        return np.array([0.0])
    positive = np.unique(times[times > 0])
    dt = positive[0] if len(positive) == 1 else float(np.min(np.diff(np.concatenate(([0.0], positive)))))
    multiples = times / dt
    if np.any(np.abs(multiples - np.round(multiples)) > 1e-9 * np.maximum(1.0, multiples)):
        raise ValueError("Output times should be integer multiples of a common step.")
    per_step = 4 * max(1, int(np.ceil(dt * points_per_unit_time / 4)))
    n_intervals = int(np.round(t_max / dt)) * per_step
    return np.arange(n_intervals + 1) * (dt / per_step)


def deltaMBound(*, t: float, curve: EpsilonCurve, tail_weight: float, o_norm: float) -> FockBoundReport:
    """Delta_m(t) = 2 ||O|| sqrt(tail + 2 Q) with Q the composite Simpson integral of sqrt(eps) plus its
    Richardson error estimate |S_h - S_2h| / 15, accumulated panel by panel.

    Parameters
    ----------
    t : float
        Time, a node of the curve grid with index divisible by 4.
    curve : EpsilonCurve
        eps_m on a uniform grid starting at 0.
    tail_weight : float
        tr[(1 - 1_m) rho_0].
    o_norm : float
        ||O||.

    Returns
    -------
    : FockBoundReport
        The bound.
    """
    x = np.asarray(curve.x)
    y = np.sqrt(np.clip(np.asarray(curve.epsilon), 0.0, None))
    if t == 0:
        index = 0
    else:
        if len(x) < 5 or x[0] != 0:
            raise ValueError("The curve grid should start at 0 and hold at least 5 nodes.")
        h = x[1] - x[0]
        if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0):
            raise ValueError("The curve grid should be uniform.")
        index = int(np.round(t / h))
        if index >= len(x) or abs(x[index] - t) > 1e-9 * max(1.0, t) or index % 4:
            raise ValueError(f"Time {t} is not a grid node with index divisible by 4.")

    if index == 0:
        integral, error = 0.0, 0.0
    else:
        h = x[1] - x[0]
        y0, y1, y2, y3 = (y[i:index:4] for i in range(4))
        y4 = y[4:index + 1:4]
        fine = h / 3 * (y0 + 4 * y1 + 2 * y2 + 4 * y3 + y4)
        coarse = 2 * h / 3 * (y0 + 4 * y2 + y4)
        integral = float(np.sum(fine))
        error = float(np.sum(np.abs(fine - coarse)) / 15)
    value = 2 * o_norm * np.sqrt(tail_weight + 2 * (integral + error))
    return FockBoundReport(t=float(t), tail_weight=float(tail_weight), integral=integral, quadrature_error=error,
                           quadrature_nodes=index + 1,
                           fock_bound=float(np.nextafter(value, np.inf)) if value > 0 else 0.0)


def tailWeight(*, state: BathState, trunc: TruncationSpec, chain: ChainMapping = None) -> float:
    """Weight of the initial bath state outside the truncated space.

    Exact for vacuum and product Fock states. For chain-thermal states of the particle mapping the
    site-reduced states are thermal, giving the union bound sum_i (n_i / (1 + n_i))^(m_i + 1).

    Raises
    ------
    UnsupportedState
        Thermal state of a chain with X != P.
    """
    if state.kind == BathStateKind.vacuum:
        return 0.0
    if state.kind == BathStateKind.fock:
        occupations = state.siteOccupations(len(state.occupations))
        outside = len(occupations) > trunc.L and any(occupations[trunc.L:])
        outside = outside or any(n > m for n, m in zip(occupations, trunc.cutoffs))
        return 1.0 if outside else 0.0
    if chain is None or chain.kind != MappingKind.particle:
        raise UnsupportedState("Thermal tail weights are certified for the particle mapping (X = P) only.")
    gamma = gamma0Thermal(chain=chain, beta=state.beta, L=trunc.L)
    xx, pp = gamma.xx.real, gamma.pp.real
    eps = np.finfo(float).eps
    # roundoff allowance of the reconstructed diagonals, each step below is rounded outward
    slack = 64 * trunc.L * eps * (np.abs(xx).sum(axis=1).max() + np.abs(pp).sum(axis=1).max())
    occupation = np.nextafter((np.diag(xx) + np.diag(pp) - 1) / 2 + slack, np.inf)
    occupation = np.clip(occupation, 0.0, None)
    ratio = np.nextafter(occupation / (1 + occupation), np.inf)
    exponents = np.asarray(trunc.cutoffs) + 1
    terms = ratio ** exponents * (1 + 4 * (exponents + 1) * eps)
    bound = float(np.sum(terms)) * (1 + 2 * trunc.L * eps)
    return min(1.0, float(np.nextafter(bound, np.inf)))


def expectation(*, state: np.ndarray, observable: np.ndarray, dim_s: int) -> float:
    """<psi| O x 1 |psi> for a system observable."""
    shaped = np.asarray(state).reshape(dim_s, -1)
    return float(np.trace(observable @ (shaped @ shaped.conj().T)).real)


def exactTruncationErrorOracle(*, system: SpinSystem, chain: ChainMapping, trunc: TruncationSpec,
                               trunc_ref: TruncationSpec, observable: np.ndarray, t: Union[float, list],
                               system_state: np.ndarray, occupations: Optional[list] = None, tol: float = 1e-10,
                               dimension_cap: int = DEFAULT_DIMENSION_CAP) -> Union[float, np.ndarray]:
    """|tr[O rho_ref(t)] - tr[O rho_trunc(t)]| by propagation in both truncations.

    The truncations may differ in chain length as well as in their cutoffs. occupations refer to the
    reference chain, vacuum by default.

    Raises
    ------
    DimensionOverflow
        Either space exceeds dimension_cap.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.diff(times) < 0) or np.any(times < 0):
        raise ValueError("Times should be non-negative and sorted.")
    observable = np.asarray(observable)
    results = []
    for spec in (trunc, trunc_ref):
        checkDimension(trunc=spec, dim_s=system.dim_s, dimension_cap=dimension_cap)
        occ = None if occupations is None else list(occupations)[:spec.L]
        hamiltonian = buildTotalHamiltonian(system=system, chain=chain, trunc=spec, dimension_cap=dimension_cap)
        psi = productState(system_state=system_state, trunc=spec, occupations=occ)
        values = []
        previous = 0.0
        span = times[-1] if times[-1] > 0 else 1.0
        for time_point in times:
            dt = time_point - previous
            if dt > 0:
                psi = propagate(hamiltonian=hamiltonian, state=psi, t=dt, tol=tol * dt / span)
            values.append(expectation(state=psi, observable=observable, dim_s=system.dim_s))
            previous = time_point
        results.append(np.array(values))
    errors = np.abs(results[1] - results[0])
    return float(errors[0]) if np.ndim(t) == 0 else errors


def certify(*, system: SpinSystem, density: SpectralDensity, kind: MappingKind, trunc: TruncationSpec,
            observable: np.ndarray, times, system_state: np.ndarray, bath_state: BathState = BathState(),
            tol: float = 1e-10, points_per_unit_time: int = 64, threads: int = 1, analytic: bool = True,
            quadrature_chain: bool = False, dimension_cap: int = DEFAULT_DIMENSION_CAP,
            logger: Logger = None) -> list[CertificateReport]:
    """Total error certificates Delta(t, L) + Delta_m(t) on a time grid.

    The chain-length bound treats the semi-infinite chain truncated after trunc.L modes, the Fock bound
    the truncation of that finite chain to the cutoffs of trunc.

    Parameters
    ----------
    system : SpinSystem
        System Hamiltonian and coupling operator.
    density : SpectralDensity
        Bath spectral density.
    kind : MappingKind
        Chain mapping.
    trunc : TruncationSpec
        Chain length and Fock cutoffs.
    observable : np.ndarray
        System observable O.
    times : array_like
        Output times, integer multiples of a common step.
    system_state : np.ndarray
        Initial system vector.
    bath_state : BathState
        Initial chain state, vacuum or product Fock state.
    tol : float
        Propagation tolerance.
    points_per_unit_time : int
        Node density of the Simpson rule.
    threads : int
        Worker threads for the eps_m evaluation.
    analytic : bool
        Use c = w_max in the chain-length bound.
    quadrature_chain : bool
        Use Stieltjes chain coefficients instead of the closed forms.
    dimension_cap : int
        Maximum total dimension.
    logger : Logger
        Logger handler.

    Returns
    -------
    : list[CertificateReport]
        One report per output time.

    Raises
    ------
    UnsupportedState
        Thermal initial bath states.
    DimensionOverflow
        Total dimension above dimension_cap.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    if bath_state.kind == BathStateKind.thermal:
        raise UnsupportedState("Exact propagation needs a pure product initial state, thermal chain states are "
                               "supported by the tail weight and the chain-length bound only.")
    checkDimension(trunc=trunc, dim_s=system.dim_s, dimension_cap=dimension_cap)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    L = trunc.L
    chain = chainFor(density=density, kind=kind, L=L, quadrature_chain=quadrature_chain)

    occupations = bath_state.siteOccupations(L)
    gamma0 = gamma0Vacuum(L) if bath_state.kind == BathStateKind.vacuum else gamma0ProductFock(occupations)
    o_norm = float(np.linalg.norm(observable, 2))

    tail = tailWeight(state=bath_state, trunc=trunc, chain=chain)
    fits = all(n <= m for n, m in zip(occupations, trunc.cutoffs))
    psi0 = productState(system_state=system_state, trunc=trunc, occupations=occupations if fits else None)
    if not fits:
        logger.warning("Initial occupations exceed the cutoffs, the truncated evolution starts from the vacuum.")

    op_start = time.time()
    model = fockModel(system=system, chain=chain, trunc=trunc, psi0=psi0, tol=tol, dimension_cap=dimension_cap,
                      logger=logger)
    grid = integrationGrid(times=times, points_per_unit_time=points_per_unit_time)
    curve = epsilonCurve(grid=grid, model=model, threads=threads, logger=logger)
    logger.info(f"eps_m for L = {L}, m = {list(trunc.cutoffs)} on {len(grid)} nodes took "
                f"{(time.time() - op_start) * 1000} msecs.")

    reports = []
    for t in times:
        spatial = generalBound(inp=spatialBoundInput(chain=chain, a_norm=system.a_norm, o_norm=o_norm,
                                                     gamma0_norm_sqrt=float(np.sqrt(gamma0.norm)), t=float(t),
                                                     L=L, analytic=analytic))
        fock = deltaMBound(t=float(t), curve=curve, tail_weight=tail, o_norm=o_norm)
        index = fock.quadrature_nodes - 1
        reports.append(CertificateReport(t=float(t), L=L, cutoffs=list(trunc.cutoffs), spatial=spatial,
                                         epsilon=curve.epsilon[index], tail_weight=tail,
                                         fock_bound=fock.fock_bound, quadrature_error=fock.quadrature_error,
                                         quadrature_nodes=fock.quadrature_nodes,
                                         total=spatial.delta_bound + fock.fock_bound))
    return reports
