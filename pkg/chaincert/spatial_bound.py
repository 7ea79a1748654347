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
"""Chain-length truncation bounds.

All bounds are products of powers, factorials and exponentials. They are accumulated as sums of
logarithms and exponentiated once, rounding the final value up.
"""

import logging
from dataclasses import dataclass
from logging import Logger
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import gammaln

from chaincert.exceptions import WrongCase
from chaincert.quadratic_dynamics import BoundCase, BoundConstants, boundConstants
from chaincert.spectral_chain import ChainMapping, SpectralDensity, mappingConstants, powerLawDensity
from chaincert.utils import roundUpExp


@dataclass(frozen=True, eq=False)
class SpatialBoundInput:
    """Everything the chain-length bound depends on, truncation after mode L-1."""

    chain: ChainMapping
    constants: BoundConstants
    gamma0_norm_sqrt: float
    h_norm: float
    o_norm: float
    t: float
    L: int

    def __post_init__(self):
        for name in ("gamma0_norm_sqrt", "h_norm", "o_norm", "t"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} ({getattr(self, name)}) should not be negative.")
        if not 1 <= self.L <= self.chain.length:
            raise ValueError(f"Truncation length L ({self.L}) should lie in [1, {self.chain.length}].")


class SpatialBoundReport(BaseModel):
    """Chain-length truncation bound at one (t, L)."""

    t: float = Field(title="Time.", description="Evolution time.")
    L: int = Field(title="Chain length.", description="Number of kept chain modes.")
    c: float = Field(title="c.", description="Upper bound of ||P_L X_L||^(1/2).")
    c_prime: Optional[float] = Field(title="c prime.", description="Constant of the exponential factor, None "
                                                                    "for the c_prime -> 0 limit.", default=None)
    case: BoundCase = Field(title="Bound regime.", description="XequalsP, BothPositive or General.")
    delta_squared_bound: float = Field(title="Squared bound.", description="Upper bound of Delta^2(t, L).")
    delta_bound: float = Field(title="Bound.", description="Upper bound of Delta(t, L).")
    lightcone_tau: float = Field(title="Light cone.", description="tau = e c t.")
    in_lightcone: bool = Field(title="Inside light cone.", description="True if tau >= L.")
    decay_estimate: Optional[float] = Field(title="Decay estimate.",
                                            description="exp(ct - L |ln(L/tau)|), only outside the light cone.",
                                            default=None)


class MinChainLengthReport(BaseModel):
    """Result of the inverse query for the shortest sufficient chain."""

    L_min: int = Field(title="Minimal chain length.", description="Smallest L with bound <= epsilon.")
    bound_at_min: float = Field(title="Bound at L_min.", description="")
    bound_below: Optional[float] = Field(title="Bound at L_min - 1.", description="None if L_min = 1.",
                                         default=None)


def _log(value: float) -> float:
    return float(np.log(value)) if value > 0 else -np.inf


def couplingConstant(*, chain: ChainMapping, L: int, c: float) -> float:
    """C = ||P_L|| |X_{L-1,L}| / c^2 + |P_{L-1,L}| / c for truncation after mode L-1."""
    sub = chain.truncated(L)
    return sub.pNorm() * abs(sub.x_boundary) / c ** 2 + abs(sub.p_boundary) / c


def _effectiveLength(inp: SpatialBoundInput) -> int:
    return 2 * inp.L if inp.constants.p_is_identity else inp.L


def _report(inp: SpatialBoundInput, log_delta_sq: float, c_prime: Optional[float]) -> SpatialBoundReport:
    delta_sq = roundUpExp(log_delta_sq)
    c, t, L = inp.constants.c, inp.t, inp.L
    tau = float(np.e * c * t)
    decay = None
    if tau < L:
        decay = 0.0 if tau == 0 else float(np.exp(c * t - L * abs(np.log(L / tau))))
    return SpatialBoundReport(t=t, L=L, c=c, c_prime=c_prime, case=inp.constants.case,
                              delta_squared_bound=delta_sq, delta_bound=float(np.sqrt(delta_sq)),
                              lightcone_tau=tau, in_lightcone=tau >= L, decay_estimate=decay)


def _logCommon(inp: SpatialBoundInput) -> float:
    """log of 4 ||O||^2 (||h|| / c) C (ct)^(L'+1) (e^(ct) + 1) / (L'+1)!."""
    c, t = inp.constants.c, inp.t
    n = _effectiveLength(inp) + 1
    C = couplingConstant(chain=inp.chain, L=inp.L, c=c)
    return (np.log(4.0) + 2 * _log(inp.o_norm) + _log(inp.h_norm) - np.log(c) + _log(C)
            + n * _log(c * t) - gammaln(n + 1) + np.logaddexp(c * t, 0.0))


def theorem1Bound(*, inp: SpatialBoundInput) -> SpatialBoundReport:
    """Chain-length bound for X = P or X, P > 0.

    Delta^2 <= 4 ||O||^2 (||h||/c) C (||gamma0||^(1/2) + t ||h||) (ct)^(L'+1) (e^(ct)+1) / (L'+1)!
    with L' = 2L if P is proportional to the identity and L' = L otherwise.

    Parameters
    ----------
    inp : SpatialBoundInput
        Bound input.

    Returns
    -------
    : SpatialBoundReport
        The certified bound.

    Raises
    ------
    WrongCase
        The chain is in the General regime, use generalBound.
    """
    if inp.constants.case == BoundCase.General:
        raise WrongCase("The closed-form bound needs X = P or X, P > 0, use generalBound for the General case.")
    log_delta_sq = _logCommon(inp) + _log(inp.gamma0_norm_sqrt + inp.t * inp.h_norm)
    return _report(inp, log_delta_sq, c_prime=None)


def generalBound(*, inp: SpatialBoundInput, c_prime: Optional[float] = None) -> SpatialBoundReport:
    """Chain-length bound valid in every regime.

    Adds the factor (||gamma0||^(1/2) + ||h|| (e^(c't) - 1)/c') e^(c't). Without an explicit c_prime the
    limit c' -> 0 is taken for XequalsP and BothPositive and c' = constants.c_prime otherwise.

    Parameters
    ----------
    inp : SpatialBoundInput
        Bound input.
    c_prime : float
        Override of c', 0 selects the limit.

    Returns
    -------
    : SpatialBoundReport
        The certified bound.
    """
    if c_prime is None:
        c_prime = 0.0 if inp.constants.case != BoundCase.General else inp.constants.c_prime
    if c_prime < 0:
        raise ValueError(f"c_prime ({c_prime}) should not be negative.")
    t = inp.t
    growth = t if c_prime == 0 else float(np.expm1(c_prime * t) / c_prime)
    log_delta_sq = _logCommon(inp) + _log(inp.gamma0_norm_sqrt + inp.h_norm * growth) + c_prime * t
    return _report(inp, log_delta_sq, c_prime=c_prime if c_prime > 0 else None)


def spatialBoundInput(*, chain: ChainMapping, a_norm: float, o_norm: float, gamma0_norm_sqrt: float, t: float,
                      L: Optional[int] = None, analytic: bool = True) -> SpatialBoundInput:
    """Assemble a bound input with ||h|| = |h_coeff| ||A_S||."""
    L = chain.length if L is None else L
    constants = boundConstants(chain=chain, L=L, analytic=analytic)
    return SpatialBoundInput(chain=chain, constants=constants, gamma0_norm_sqrt=gamma0_norm_sqrt,
                             h_norm=abs(chain.h_coeff) * a_norm, o_norm=o_norm, t=t, L=L)


def _wrapperReport(*, log_delta_sq: float, omega: float, t: float, L: int, case: BoundCase,
                   c_prime: Optional[float]) -> SpatialBoundReport:
    tau = float(np.e * omega * t)
    delta_sq = roundUpExp(log_delta_sq)
    decay = None
    if tau < L:
        decay = 0.0 if tau == 0 else float(np.exp(omega * t - L * abs(np.log(L / tau))))
    return SpatialBoundReport(t=t, L=L, c=omega, c_prime=c_prime, case=case, delta_squared_bound=delta_sq,
                              delta_bound=float(np.sqrt(delta_sq)), lightcone_tau=tau, in_lightcone=tau >= L,
                              decay_estimate=decay)


def particleBound(*, density: SpectralDensity, o_norm: float, a_norm: float, gamma0_norm_sqrt: float, t: float,
                  L: int) -> SpatialBoundReport:
    """Particle mapping bound with c = c' = w_max and C <= 2.

    Delta^2 <= 8 mu0 ||O||^2 (||A_S||/w) (wt)^(L+1)/(L+1)! (e^(wt)+1) (||gamma0||^(1/2) + mu0 ||A_S|| t).
    """
    mu0 = mappingConstants(density=density).mu0
    w = density.omega_max
    n = L + 1
    log_delta_sq = (np.log(8.0) + _log(mu0) + 2 * _log(o_norm) + _log(a_norm) - np.log(w) + n * _log(w * t)
                    - gammaln(n + 1) + np.logaddexp(w * t, 0.0) + _log(gamma0_norm_sqrt + mu0 * a_norm * t))
    return _wrapperReport(log_delta_sq=log_delta_sq, omega=w, t=t, L=L, case=BoundCase.XequalsP, c_prime=None)


def phononBound(*, density: SpectralDensity, o_norm: float, a_norm: float, gamma0_norm_sqrt: float, t: float,
                L: int) -> SpatialBoundReport:
    """Phonon mapping bound with c = c' = w_max and C <= 1.

    The massive form reads 4 mu1 ||O||^2 (||A_S||/w) (wt)^(2L+1)/(2L+1)! (e^(wt)+1) (||gamma0||^(1/2) + mu1 ||A_S|| t),
    the massless form replaces the last factor by (||gamma0||^(1/2) + ||h|| (e^(wt)-1)/w) e^(wt).
    """
    mu1 = mappingConstants(density=density).mu1
    w = density.omega_max
    n = 2 * L + 1
    log_delta_sq = (np.log(4.0) + _log(mu1) + 2 * _log(o_norm) + _log(a_norm) - np.log(w) + n * _log(w * t)
                    - gammaln(n + 1) + np.logaddexp(w * t, 0.0))
    h_norm = mu1 * a_norm
    if density.massive:
        log_delta_sq += _log(gamma0_norm_sqrt + h_norm * t)
        return _wrapperReport(log_delta_sq=log_delta_sq, omega=w, t=t, L=L, case=BoundCase.BothPositive,
                              c_prime=None)
    log_delta_sq += _log(gamma0_norm_sqrt + h_norm * np.expm1(w * t) / w) + w * t
    return _wrapperReport(log_delta_sq=log_delta_sq, omega=w, t=t, L=L, case=BoundCase.General, c_prime=w)


def powerLawBound(*, kind: str, alpha: float, s: float, omega_c: float, o_norm: float, a_norm: float,
                  gamma0_norm_sqrt: float, t: float, L: int) -> SpatialBoundReport:
    """Dispatch to particleBound or phononBound from bare power-law parameters."""
    density = powerLawDensity(alpha=alpha, s=s, omega_c=omega_c)
    bound = particleBound if kind == "particle" else phononBound
    return bound(density=density, o_norm=o_norm, a_norm=a_norm, gamma0_norm_sqrt=gamma0_norm_sqrt, t=t, L=L)


def minChainLength(*, chain_factory: Callable[[int], ChainMapping], a_norm: float, o_norm: float,
                   gamma0_norm_sqrt: float, t: float, epsilon: float, analytic: bool = True,
                   max_length: int = 100000, logger: Logger = None) -> MinChainLengthReport:
    """Smallest chain length whose generalBound does not exceed epsilon.

    Lengths are scanned upwards from 1, the bound is not monotone inside the light cone.

    Parameters
    ----------
    chain_factory : Callable[[int], ChainMapping]
        Returns the chain of a given length, e.g. ``lambda L: particleChain(density=J, L=L)``.
    a_norm : float
        ||A_S||.
    o_norm : float
        ||O||.
    gamma0_norm_sqrt : float
        ||gamma0||^(1/2).
    t : float
        Time.
    epsilon : float
        Target error.
    analytic : bool
        Use c = w_max.
    max_length : int
        Safety limit of the scan.
    logger : Logger
        Logger handler.

    Returns
    -------
    : MinChainLengthReport
        L_min with the bounds at L_min and L_min - 1.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    if not epsilon > 0:
        raise ValueError(f"Target error epsilon ({epsilon}) should be positive.")
    if t < 0:
        raise ValueError(f"Time t ({t}) should not be negative.")

    previous = None
    for L in range(1, max_length + 1):
        inp = spatialBoundInput(chain=chain_factory(L), a_norm=a_norm, o_norm=o_norm,
                                gamma0_norm_sqrt=gamma0_norm_sqrt, t=t, L=L, analytic=analytic)
        bound = generalBound(inp=inp).delta_bound
        if bound <= epsilon:
            logger.debug(f"Chain length {L} reaches bound {bound} <= {epsilon} at t = {t}.")
            return MinChainLengthReport(L_min=L, bound_at_min=bound, bound_below=previous)
        previous = bound
    raise ValueError(f"No chain length up to {max_length} reaches epsilon = {epsilon}.")


def multiBathBound(*, baths: list[SpatialBoundInput]) -> float:
    """Sum of the individual generalBound values of several independently truncated chains."""
    if len(baths) == 0:
        raise ValueError("At least one bath is needed.")
    return float(sum(generalBound(inp=bath).delta_bound for bath in baths))
