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
"""Truncated Fock space operators and Hamiltonian assembly.

Basis ordering: the system factor is slowest, followed by the chain sites 0, ..., L-1, the Fock index of
each site running fastest within its factor. Site i keeps the levels 0, ..., m_i.
"""

import logging
import time
from dataclasses import dataclass
from functools import cached_property, lru_cache, reduce
from logging import Logger

import numpy as np
import scipy.sparse as sp

from chaincert.exceptions import DimensionMismatch, DimensionOverflow
from chaincert.spectral_chain import ChainMapping

DEFAULT_DIMENSION_CAP = 2 ** 24

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class TruncationSpec:
    """Per-site Fock cutoffs m_0, ..., m_{L-1}."""

    cutoffs: tuple

    def __post_init__(self):
        cutoffs = tuple(int(m) for m in self.cutoffs)
        if len(cutoffs) < 1:
            raise ValueError("A truncation needs at least one site.")
        if any(m < 1 for m in cutoffs):
            raise ValueError(f"All Fock cutoffs should be at least 1, got {cutoffs}.")
        object.__setattr__(self, 'cutoffs', cutoffs)

    @classmethod
    def uniform(cls, L: int, m: int) -> "TruncationSpec":
        return cls(cutoffs=(m,) * L)

    @property
    def L(self) -> int:
        return len(self.cutoffs)

    @property
    def dims(self) -> tuple:
        return tuple(m + 1 for m in self.cutoffs)

    @property
    def bath_dimension(self) -> int:
        return int(np.prod(self.dims, dtype=object))


def dimensionOf(*, trunc: TruncationSpec, dim_s: int = 2) -> int:
    """Total dimension dim_S * prod(m_i + 1)."""
    return dim_s * trunc.bath_dimension


def checkDimension(*, trunc: TruncationSpec, dim_s: int, dimension_cap: int = DEFAULT_DIMENSION_CAP):
    """Raise DimensionOverflow if the truncated space exceeds the cap."""
    dimension = dimensionOf(trunc=trunc, dim_s=dim_s)
    if dimension > dimension_cap:
        raise DimensionOverflow(f"Truncated Hilbert space of dimension {dimension} exceeds the cap {dimension_cap}.")


@dataclass(frozen=True, eq=False)
class SiteOperators:
    """Projected single-site operators x^m, p^m and projected quadratics 1_m r s 1_m."""

    m: int
    x: np.ndarray
    p: np.ndarray
    xx: np.ndarray
    pp: np.ndarray
    xp: np.ndarray
    px: np.ndarray


@dataclass(frozen=True, eq=False)
class CornerCorrections:
    """K^rs = 1_m r s 1_m - r^m s^m, supported on |m><m| only."""

    xx: np.ndarray
    pp: np.ndarray
    xp: np.ndarray
    px: np.ndarray


@lru_cache(maxsize=64)
def siteOperators(m: int) -> SiteOperators:
    """Site operators for cutoff m from ladder matrices of dimension m + 2.

    x = (a^dag + a)/sqrt(2) and p = i(a^dag - a)/sqrt(2). Products are formed before projecting, so the
    quadratics include the path through level m + 1.
    """
    if m < 1:
        raise ValueError(f"Fock cutoff m ({m}) should be at least 1.")
    a = np.diag(np.sqrt(np.arange(1, m + 2, dtype=float)), k=1)
    x = (a.T + a) / np.sqrt(2)
    p = 1j * (a.T - a) / np.sqrt(2)
    keep = slice(0, m + 1)
    blocks = dict(x=x[keep, keep], p=p[keep, keep], xx=(x @ x)[keep, keep], pp=(p @ p)[keep, keep].real,
                  xp=(x @ p)[keep, keep], px=(p @ x)[keep, keep])
    blocks = {name: np.array(block) for name, block in blocks.items()}
    # shared through the cache
    for block in blocks.values():
        block.setflags(write=False)
    return SiteOperators(m=m, **blocks)


def cornerCorrections(m: int) -> CornerCorrections:
    """Differences between projected quadratics and products of projected operators."""
    ops = siteOperators(m)
    return CornerCorrections(xx=ops.xx - ops.x @ ops.x, pp=ops.pp - (ops.p @ ops.p).real,
                             xp=ops.xp - ops.x @ ops.p, px=ops.px - ops.p @ ops.x)


def siteEmbedding(*, operator, site: int, dims: tuple) -> sp.csr_matrix:
    """Embed a single-site operator into the bath space of the given site dimensions."""
    if operator.shape != (dims[site], dims[site]):
        raise DimensionMismatch(f"Operator of shape {operator.shape} does not fit site {site} of size {dims[site]}.")
    left = int(np.prod(dims[:site], dtype=object))
    right = int(np.prod(dims[site + 1:], dtype=object))
    return sp.kron(sp.kron(sp.identity(left, format='csr'), sp.csr_matrix(operator)),
                   sp.identity(right, format='csr'), format='csr')


def systemEmbedding(*, system_operator, bath_operator) -> sp.csr_matrix:
    """system_operator x bath_operator in the full space."""
    return sp.kron(sp.csr_matrix(system_operator), sp.csr_matrix(bath_operator), format='csr')


@dataclass(frozen=True, eq=False)
class SpinSystem:
    """System Hamiltonian H_S and coupling operator A_S."""

    h_s: np.ndarray
    a_s: np.ndarray
    delta: float = None

    def __post_init__(self):
        if self.h_s.shape != self.a_s.shape or self.h_s.shape[0] != self.h_s.shape[1]:
            raise DimensionMismatch("H_S and A_S must be square matrices of the same size.")
        for name, matrix in (("H_S", self.h_s), ("A_S", self.a_s)):
            if not np.allclose(matrix, matrix.conj().T, atol=1e-14):
                raise ValueError(f"{name} should be Hermitian.")

    @classmethod
    def spinBoson(cls, delta: float) -> "SpinSystem":
        """H_S = -delta sigma_x / 2 and A_S = sigma_z / 2."""
        return cls(h_s=-delta * SIGMA_X / 2, a_s=SIGMA_Z / 2, delta=float(delta))

    @property
    def dim_s(self) -> int:
        return self.h_s.shape[0]

    @cached_property
    def a_norm(self) -> float:
        return float(np.linalg.norm(self.a_s, 2))


@dataclass(frozen=True, eq=False)
class SparseHamiltonian:
    """Sparse Hermitian matrix with the parts it contains."""

    matrix: sp.csr_matrix
    dims: tuple
    dim_s: int
    includes: tuple
    h_norm: float = 0.0

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _realIfExact(matrix: sp.csr_matrix) -> sp.csr_matrix:
    if np.iscomplexobj(matrix.data) and not np.any(matrix.data.imag):
        return sp.csr_matrix(matrix.real)
    return matrix


def bathOperators(*, trunc: TruncationSpec) -> tuple[list, list]:
    """Embedded x_i^m and p_i^m of every site, in the bath space."""
    dims = trunc.dims
    xs = [siteEmbedding(operator=siteOperators(m).x, site=i, dims=dims) for i, m in enumerate(trunc.cutoffs)]
    ps = [siteEmbedding(operator=siteOperators(m).p, site=i, dims=dims) for i, m in enumerate(trunc.cutoffs)]
    return xs, ps


def buildBathHamiltonian(*, chain: ChainMapping, trunc: TruncationSpec, dim_s: int = 1,
                         dimension_cap: int = DEFAULT_DIMENSION_CAP, logger: Logger = None) -> SparseHamiltonian:
    """Projected bath Hamiltonian 1_m H_B 1_m on the bath space.

    Diagonal terms use the projected quadratics, the nearest-neighbour terms the products x_i^m x_j^m
    and p_i^m p_j^m, which coincide with their projections for i != j.

    Parameters
    ----------
    chain : ChainMapping
        Chain with at least trunc.L modes.
    trunc : TruncationSpec
        Fock cutoffs.
    dim_s : int
        System dimension, only used for the dimension check.
    dimension_cap : int
        Maximum total dimension.
    logger : Logger
        Logger handler.

    Returns
    -------
    : SparseHamiltonian
        Bath Hamiltonian acting on the bath factor only.

    Raises
    ------
    DimensionOverflow
        Total dimension above dimension_cap.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    if chain.length < trunc.L:
        raise DimensionMismatch(f"Chain has {chain.length} modes, truncation needs {trunc.L}.")
    checkDimension(trunc=trunc, dim_s=dim_s, dimension_cap=dimension_cap)

    op_start = time.time()
    sub = chain.truncated(trunc.L)
    X, P = sub.X, sub.P
    dims = trunc.dims
    xs, ps = bathOperators(trunc=trunc)
    terms = []
    for i, m in enumerate(trunc.cutoffs):
        ops = siteOperators(m)
        terms.append(siteEmbedding(operator=0.5 * (X[i, i] * ops.xx + P[i, i] * ops.pp), site=i, dims=dims))
    for i in range(trunc.L - 1):
        if X[i, i + 1] != 0:
            terms.append(X[i, i + 1] * (xs[i] @ xs[i + 1]))
        if P[i, i + 1] != 0:
            terms.append(P[i, i + 1] * (ps[i] @ ps[i + 1]))
    matrix = reduce(lambda a, b: a + b, terms).tocsr()
    matrix = _realIfExact(matrix)
    matrix.eliminate_zeros()
    logger.debug(f"Assembling bath Hamiltonian of dimension {matrix.shape[0]} took "
                 f"{(time.time() - op_start) * 1000} msecs.")
    return SparseHamiltonian(matrix=matrix, dims=dims, dim_s=1, includes=("H_B",))


def buildTotalHamiltonian(*, system: SpinSystem, chain: ChainMapping, trunc: TruncationSpec,
                          dimension_cap: int = DEFAULT_DIMENSION_CAP, logger: Logger = None) -> SparseHamiltonian:
    """H_m = H_S x 1 + 1_S x H_B^m + h_coeff A_S x x_0^m.

    Raises
    ------
    DimensionOverflow
        Total dimension above dimension_cap.
    """
    bath = buildBathHamiltonian(chain=chain, trunc=trunc, dim_s=system.dim_s, dimension_cap=dimension_cap,
                                logger=logger)
    n_bath = trunc.bath_dimension
    x0 = siteEmbedding(operator=siteOperators(trunc.cutoffs[0]).x, site=0, dims=trunc.dims)
    matrix = (systemEmbedding(system_operator=system.h_s, bath_operator=sp.identity(n_bath))
              + systemEmbedding(system_operator=np.eye(system.dim_s), bath_operator=bath.matrix)
              + chain.h_coeff * systemEmbedding(system_operator=system.a_s, bath_operator=x0))
    matrix = _realIfExact(matrix.tocsr())
    matrix.eliminate_zeros()
    return SparseHamiltonian(matrix=matrix, dims=trunc.dims, dim_s=system.dim_s, includes=("H_S", "H_B", "V"),
                             h_norm=abs(chain.h_coeff) * system.a_norm)


def embedBathHamiltonian(*, bath: SparseHamiltonian, dim_s: int) -> SparseHamiltonian:
    """1_S x H_B^m in the full space."""
    matrix = systemEmbedding(system_operator=np.eye(dim_s), bath_operator=bath.matrix)
    return SparseHamiltonian(matrix=_realIfExact(matrix), dims=bath.dims, dim_s=dim_s, includes=("H_B",))


def productState(*, system_state, trunc: TruncationSpec, occupations=None) -> np.ndarray:
    """Product vector system_state x |n_0> x ... x |n_{L-1}>, chain vacuum by default."""
    system_state = np.asarray(system_state, dtype=complex)
    norm = np.linalg.norm(system_state)
    if norm == 0:
        raise ValueError("System state must not vanish.")
    occupations = [0] * trunc.L if occupations is None else list(occupations)
    if len(occupations) != trunc.L:
        raise DimensionMismatch(f"Got {len(occupations)} occupations for {trunc.L} sites.")
    if any(n < 0 or n > m for n, m in zip(occupations, trunc.cutoffs)):
        raise ValueError(f"Occupations {occupations} do not fit the cutoffs {trunc.cutoffs}.")
    vector = system_state / norm
    for n, d in zip(occupations, trunc.dims):
        site = np.zeros(d)
        site[n] = 1.0
        vector = np.kron(vector, site)
    return vector


def spinState(name: str) -> np.ndarray:
    """Named spin-1/2 state, up and down refer to sigma_z, plus and minus to sigma_x."""
    states = {"up": [1.0, 0.0], "down": [0.0, 1.0], "plus": [1 / np.sqrt(2), 1 / np.sqrt(2)],
              "minus": [1 / np.sqrt(2), -1 / np.sqrt(2)]}
    if name not in states:
        raise ValueError(f"Unknown spin state {name}, it should be one of: {', '.join(states)}.")
    return np.array(states[name], dtype=complex)


def observableMatrix(name: str) -> np.ndarray:
    """Pauli observable by name."""
    matrices = {"sigma_x": SIGMA_X, "sigma_y": SIGMA_Y, "sigma_z": SIGMA_Z}
    if name not in matrices:
        raise ValueError(f"Unknown observable {name}, it should be one of: {', '.join(matrices)}.")
    return matrices[name]
