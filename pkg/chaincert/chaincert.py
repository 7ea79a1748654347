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
"""Main module of chaincert, one pipeline per command."""

# python native libraries
import logging
import os
import time
from logging import Logger

# third party packages
import numpy as np
import pandas as pd
from pydantic import TypeAdapter

# local packages
from chaincert.config import Config
from chaincert.exceptions import ChainCertError
from chaincert.fock_bound import (BathState, BathStateKind, CertificateReport, certify, deltaMBound, epsilonCurve,
                                  fockModel, integrationGrid, tailWeight)
from chaincert.fock_space import SpinSystem, TruncationSpec, observableMatrix, productState, spinState
from chaincert.quadratic_dynamics import gamma0ProductFock, gamma0Thermal, gamma0Vacuum
from chaincert.spatial_bound import generalBound, multiBathBound, spatialBoundInput
from chaincert.spectral_chain import (DispersionSpec, MappingKind, SpectralDensity, chainCoefficientsTable, chainFor,
                                      powerLawDensity, spectralDensityFromDispersion, tabulatedDensity)
from chaincert.utils import closeLogger, saveJsonToDisk, saveSparseTriplets, saveTableToDisk, setupLogger

COMMANDS = ("chain-coeffs", "spatial-bound", "fock-bound", "certify")


def densityFromSettings(*, spectral_chain_settings: dict, logger: Logger = None) -> SpectralDensity:
    """Power law, tabulated density or density derived from a dispersion table."""
    settings = spectral_chain_settings
    if settings['spectral_table'] is not None:
        table = np.loadtxt(settings['spectral_table'], ndmin=2)
        return tabulatedDensity(omega=table[:, 0], j_values=table[:, 1])
    if settings['dispersion_table'] is not None:
        table = np.loadtxt(settings['dispersion_table'], ndmin=2)
        return spectralDensityFromDispersion(dispersion=DispersionSpec(k=table[:, 0], g=table[:, 1], h=table[:, 2]),
                                             logger=logger)
    return powerLawDensity(alpha=settings['alpha'], s=settings['s'], omega_c=settings['omega_c'])


def observableFromSettings(*, system_settings: dict) -> np.ndarray:
    """Pauli matrix by name or a 2x2 matrix read from a text file."""
    name = system_settings['observable']
    if name in ("sigma_x", "sigma_y", "sigma_z"):
        return observableMatrix(name)
    matrix = np.loadtxt(name, ndmin=2)
    if matrix.shape != (2, 2) or not np.allclose(matrix, matrix.T):
        raise ValueError(f"Observable file {name} should hold a symmetric 2x2 matrix.")
    return matrix


def bathStateFromSettings(*, bath_state_settings: dict) -> BathState:
    """Initial chain state from the configuration."""
    occupations = bath_state_settings['occupations']
    return BathState(kind=BathStateKind(bath_state_settings['state']),
                     occupations=None if occupations is None else tuple(occupations),
                     beta=bath_state_settings['beta'])


def timeGrid(*, time_settings: dict) -> np.ndarray:
    """Uniform output times including 0."""
    return np.linspace(0.0, time_settings['t_max'], time_settings['points'])


def truncations(*, truncation_settings: dict) -> list[TruncationSpec]:
    """Uniform (L, m) sweep followed by the explicit cutoff vectors."""
    specs = [TruncationSpec.uniform(L, m) for L in truncation_settings['chain_lengths']
             for m in truncation_settings['fock_cutoffs']]
    for cutoffs in truncation_settings['site_cutoffs'] or []:
        specs.append(TruncationSpec(cutoffs=tuple(cutoffs)))
    return specs


def _gamma0(*, bath_state: BathState, chain, L: int):
    if bath_state.kind == BathStateKind.thermal:
        return gamma0Thermal(chain=chain, beta=bath_state.beta, L=L)
    if bath_state.kind == BathStateKind.fock:
        return gamma0ProductFock(bath_state.siteOccupations(L))
    return gamma0Vacuum(L)


def chainCoefficients(*, config_dict: dict, logger: Logger = None) -> pd.DataFrame:
    """Write chain_coefficients.csv for the longest configured chain.

    Parameters
    ----------
    config_dict : dict
        Content of the validated config file.
    logger : Logger
        Logger handler.

    Returns
    -------
    : pd.DataFrame
        The written table.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    settings = config_dict['spectral_chain_settings']
    L = max(config_dict['truncation_settings']['chain_lengths'])
    density = densityFromSettings(spectral_chain_settings=settings, logger=logger)
    op_start = time.time()
    chain = chainFor(density=density, kind=MappingKind(settings['mapping']), L=L,
                     quadrature_chain=settings['quadrature_chain'])
    logger.debug(f"Computing {L} chain coefficients took {(time.time() - op_start) * 1000} msecs.")
    table = chainCoefficientsTable(chain=chain)
    output_path = os.path.join(config_dict['result_settings']['results_dir'], "chain_coefficients.csv")
    saveTableToDisk(table=table, output_path=output_path)
    logger.info(f"Chain coefficients of the {settings['mapping']} mapping written to {output_path}.")
    return table


def spatialBound(*, config_dict: dict, logger: Logger = None) -> pd.DataFrame:
    """Write spatial_bound.csv with the chain-length bound over the (L, t) sweep.

    Parameters
    ----------
    config_dict : dict
        Content of the validated config file.
    logger : Logger
        Logger handler.

    Returns
    -------
    : pd.DataFrame
        The written table.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    settings = config_dict['spectral_chain_settings']
    analytic = config_dict['numerics_settings']['analytic_constants']
    kind = MappingKind(settings['mapping'])
    density = densityFromSettings(spectral_chain_settings=settings, logger=logger)
    system = SpinSystem.spinBoson(config_dict['system_settings']['delta'])
    o_norm = float(np.linalg.norm(observableFromSettings(system_settings=config_dict['system_settings']), 2))
    bath_state = bathStateFromSettings(bath_state_settings=config_dict['bath_state_settings'])
    times = timeGrid(time_settings=config_dict['time_settings'])

    extra_baths = []
    for bath in config_dict['multi_bath_settings']:
        bath_chain = chainFor(density=powerLawDensity(alpha=bath['alpha'], s=bath['s'], omega_c=bath['omega_c']),
                              kind=MappingKind(bath['mapping']), L=bath['chain_length'])
        extra_baths.append((bath_chain, bath['coupling_norm']))

    rows = []
    for L in config_dict['truncation_settings']['chain_lengths']:
        chain = chainFor(density=density, kind=kind, L=L, quadrature_chain=settings['quadrature_chain'])
        gamma0_norm_sqrt = float(np.sqrt(_gamma0(bath_state=bath_state, chain=chain, L=L).norm))
        for t in times:
            inp = spatialBoundInput(chain=chain, a_norm=system.a_norm, o_norm=o_norm,
                                    gamma0_norm_sqrt=gamma0_norm_sqrt, t=float(t), L=L, analytic=analytic)
            report = generalBound(inp=inp)
            row = dict(t=report.t, L=report.L, c=report.c, c_prime=report.c_prime, case=report.case.value,
                       delta_bound=report.delta_bound, tau=report.lightcone_tau, in_lightcone=report.in_lightcone,
                       decay_estimate=report.decay_estimate)
            if extra_baths:
                others = [spatialBoundInput(chain=bath_chain, a_norm=a_norm, o_norm=o_norm,
                                            gamma0_norm_sqrt=float(np.sqrt(gamma0Vacuum(bath_chain.length).norm)),
                                            t=float(t), L=bath_chain.length, analytic=analytic)
                          for bath_chain, a_norm in extra_baths]
                row['multi_bath_total'] = multiBathBound(baths=[inp] + others)
            rows.append(row)
        logger.info(f"Chain-length bound for L = {L} at t = {times[-1]}: {rows[-1]['delta_bound']}.")

    table = pd.DataFrame(rows)
    output_path = os.path.join(config_dict['result_settings']['results_dir'], "spatial_bound.csv")
    saveTableToDisk(table=table, output_path=output_path)
    return table


def fockBound(*, config_dict: dict, logger: Logger = None) -> pd.DataFrame:
    """Write fock_bound.csv and fock_bound.json with eps_m(t) and Delta_m(t) per truncation.

    Parameters
    ----------
    config_dict : dict
        Content of the validated config file.
    logger : Logger
        Logger handler.

    Returns
    -------
    : pd.DataFrame
        The written table.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    settings = config_dict['spectral_chain_settings']
    numerics = config_dict['numerics_settings']
    kind = MappingKind(settings['mapping'])
    density = densityFromSettings(spectral_chain_settings=settings, logger=logger)
    system = SpinSystem.spinBoson(config_dict['system_settings']['delta'])
    spin = spinState(config_dict['system_settings']['initial_spin'])
    o_norm = float(np.linalg.norm(observableFromSettings(system_settings=config_dict['system_settings']), 2))
    bath_state = bathStateFromSettings(bath_state_settings=config_dict['bath_state_settings'])
    times = timeGrid(time_settings=config_dict['time_settings'])
    grid = integrationGrid(times=times, points_per_unit_time=numerics['points_per_unit_time'])
    if bath_state.kind == BathStateKind.thermal:
        raise ValueError("The Fock bound needs a vacuum or Fock initial chain state.")

    rows, curves = [], []
    for trunc in truncations(truncation_settings=config_dict['truncation_settings']):
        chain = chainFor(density=density, kind=kind, L=trunc.L, quadrature_chain=settings['quadrature_chain'])
        occupations = bath_state.siteOccupations(trunc.L)
        fits = all(n <= m for n, m in zip(occupations, trunc.cutoffs))
        psi0 = productState(system_state=spin, trunc=trunc, occupations=occupations if fits else None)
        model = fockModel(system=system, chain=chain, trunc=trunc, psi0=psi0, tol=numerics['tol'],
                          dimension_cap=numerics['dimension_cap'], logger=logger)
        if config_dict['result_settings'].get('export_hamiltonians', False):
            name = f"hamiltonian_L{trunc.L}_m{'-'.join(str(m) for m in trunc.cutoffs)}.txt"
            saveSparseTriplets(matrix=model.total.matrix,
                               output_path=os.path.join(config_dict['result_settings']['results_dir'], name))
        op_start = time.time()
        curve = epsilonCurve(grid=grid, model=model, threads=numerics['threads'],
                             parameters=dict(alpha=density.alpha, s=density.s, omega_c=density.omega_c,
                                             delta=system.delta, tol=numerics['tol']), logger=logger)
        logger.info(f"eps_m for L = {trunc.L}, m = {list(trunc.cutoffs)} took "
                    f"{(time.time() - op_start) * 1000} msecs.")
        tail = tailWeight(state=bath_state, trunc=trunc, chain=chain)
        for t in times:
            report = deltaMBound(t=float(t), curve=curve, tail_weight=tail, o_norm=o_norm)
            rows.append(dict(L=trunc.L, m=' '.join(str(m) for m in trunc.cutoffs), t=report.t,
                             epsilon=curve.epsilon[report.quadrature_nodes - 1], tail=tail,
                             fock_bound=report.fock_bound))
        curves.append(curve.model_dump(mode='json'))

    table = pd.DataFrame(rows)
    results_dir = config_dict['result_settings']['results_dir']
    saveTableToDisk(table=table, output_path=os.path.join(results_dir, "fock_bound.csv"))
    saveJsonToDisk(data=dict(curves=curves), output_path=os.path.join(results_dir, "fock_bound.json"))
    return table


def certifyRun(*, config_dict: dict, logger: Logger = None) -> pd.DataFrame:
    """Write certificate.csv, certificate.json and certificate_schema.json.

    Parameters
    ----------
    config_dict : dict
        Content of the validated config file.
    logger : Logger
        Logger handler.

    Returns
    -------
    : pd.DataFrame
        The written table.
    """
    if logger is None:
        logger = logging.getLogger(__name__)
    settings = config_dict['spectral_chain_settings']
    numerics = config_dict['numerics_settings']
    density = densityFromSettings(spectral_chain_settings=settings, logger=logger)
    system = SpinSystem.spinBoson(config_dict['system_settings']['delta'])
    observable = observableFromSettings(system_settings=config_dict['system_settings'])
    bath_state = bathStateFromSettings(bath_state_settings=config_dict['bath_state_settings'])
    times = timeGrid(time_settings=config_dict['time_settings'])

    reports = []
    for trunc in truncations(truncation_settings=config_dict['truncation_settings']):
        reports.extend(certify(system=system, density=density, kind=MappingKind(settings['mapping']), trunc=trunc,
                               observable=observable, times=times,
                               system_state=spinState(config_dict['system_settings']['initial_spin']),
                               bath_state=bath_state, tol=numerics['tol'],
                               points_per_unit_time=numerics['points_per_unit_time'], threads=numerics['threads'],
                               analytic=numerics['analytic_constants'], quadrature_chain=settings['quadrature_chain'],
                               dimension_cap=numerics['dimension_cap'], logger=logger))

    table = pd.DataFrame([dict(L=r.L, m=' '.join(str(m) for m in r.cutoffs), t=r.t, epsilon=r.epsilon,
                               tail=r.tail_weight, fock_bound=r.fock_bound, spatial_bound=r.spatial.delta_bound,
                               total=r.total) for r in reports])
    results_dir = config_dict['result_settings']['results_dir']
    adapter = TypeAdapter(list[CertificateReport])
    saveTableToDisk(table=table, output_path=os.path.join(results_dir, "certificate.csv"))
    saveJsonToDisk(data=adapter.dump_python(reports, mode='json'),
                   output_path=os.path.join(results_dir, "certificate.json"))
    saveJsonToDisk(data=adapter.json_schema(), output_path=os.path.join(results_dir, "certificate_schema.json"))
    logger.info(f"Largest certified total error: {table['total'].max()}.")
    return table


def chainCert(*, config_dict: dict, command: str) -> pd.DataFrame:
    """Run one chaincert command.

    Parameters
    ----------
    config_dict : dict
        Content of the user config file.
    command : str
        One of chain-coeffs, spatial-bound, fock-bound or certify.

    Returns
    -------
    : pd.DataFrame
        Table written by the command.

    Raises
    ------
    ChainCertError
        Named failures of the library pass through unchanged.
    Exception
        Failed to run the command.
    """
    if command not in COMMANDS:
        raise ValueError(f"Unknown command {command}, it should be one of: {', '.join(COMMANDS)}.")
    config_dict = Config(**config_dict).model_dump(by_alias=True)
    results_dir = config_dict['result_settings']['results_dir']
    if not os.path.exists(results_dir):
        os.makedirs(results_dir)
    logger = setupLogger(result_settings=config_dict['result_settings'])
    pipelines = {"chain-coeffs": chainCoefficients, "spatial-bound": spatialBound, "fock-bound": fockBound,
                 "certify": certifyRun}
    try:
        op_start = time.time()
        table = pipelines[command](config_dict=config_dict, logger=logger)
        logger.info(f"Command {command} took {(time.time() - op_start) * 1000} msecs.")
    except (ChainCertError, ValueError, OSError):
        raise
    except Exception as e:
        raise Exception(f"Failed to run chaincert {command} => {e}")
    finally:
        closeLogger(logger=logger)
    return table
