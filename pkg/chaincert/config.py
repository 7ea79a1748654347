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
"""Input data module for chaincert."""

# python native libraries
import json
import os
from enum import Enum
from json import JSONDecodeError
from typing import List, Optional

# third party packages
from pydantic import BaseModel, Field, StrictBool, field_validator, model_validator


class MappingName(str, Enum):
    """Enum for supported chain mappings."""

    particle = "particle"
    phonon = "phonon"


class SpinStateName(str, Enum):
    """Enum for named initial spin states."""

    up = "up"
    down = "down"
    plus = "plus"
    minus = "minus"


class BathStateName(str, Enum):
    """Enum for initial chain states."""

    vacuum = "vacuum"
    fock = "fock"
    thermal = "thermal"


def _checkFile(v: Optional[str]) -> Optional[str]:
    """Resolve a file path relative to the working directory or its parent."""
    if v is None:
        return v
    v_abs = os.path.abspath(v)
    if not os.path.exists(v_abs):
        v_parent = os.path.abspath(os.path.join(os.pardir, v))
        if not os.path.exists(v_parent):
            raise ValueError(f"File path is invalid: {v}")
        return v_parent
    return v_abs


class SpectralChainSettings(BaseModel, extra='forbid'):
    """Template for spectral_chain_settings in config file."""

    mapping: MappingName = Field(
        title="Chain mapping.",
        description="particle (X = P) or phonon (P = w_max 1).",
        default=MappingName.particle
    )
    alpha: float = Field(
        title="Coupling strength.",
        description="alpha of J(w) = pi alpha w_c^(1-s) w^s on [0, w_c].",
        default=0.8, ge=0.0
    )
    s: float = Field(
        title="Spectral exponent.",
        description="s > 0, ohmic for s = 1.",
        default=3.0, gt=0.0
    )
    omega_c: float = Field(
        title="Cutoff frequency.",
        description="Upper edge of the spectral support.",
        default=1.0, gt=0.0
    )
    spectral_table: Optional[str] = Field(
        title="Tabulated spectral density.",
        description="Whitespace separated two-column file w, J(w), replaces the power law.",
        default=None
    )
    dispersion_table: Optional[str] = Field(
        title="Tabulated dispersion relation.",
        description="Whitespace separated three-column file k, g(k), h(k), replaces the power law.",
        default=None
    )
    quadrature_chain: Optional[StrictBool] = Field(
        title="Chain coefficients by quadrature.",
        description="Compute the chain with the Stieltjes procedure instead of the closed forms.",
        default=False
    )

    @field_validator("spectral_table", "dispersion_table")
    def checkTable(cls, v):
        """Check if the table file exists."""
        return _checkFile(v)

    @model_validator(mode='after')
    def checkSource(self):
        """Check that at most one tabulated source is set and tables use the quadrature chain."""
        if self.spectral_table is not None and self.dispersion_table is not None:
            raise ValueError("Expected spectral_table OR dispersion_table, not both.")
        if (self.spectral_table is not None or self.dispersion_table is not None) and not self.quadrature_chain:
            raise ValueError("Tabulated densities have no closed-form chain, set quadrature_chain to true.")
        return self


class SystemSettings(BaseModel, extra='forbid'):
    """Template for system_settings in config file."""

    delta: float = Field(
        title="Tunnelling amplitude.",
        description="H_S = -delta sigma_x / 2.",
        default=1.0
    )
    initial_spin: SpinStateName = Field(
        title="Initial spin state.",
        description="It should be one of: up, down, plus or minus.",
        default=SpinStateName.up
    )
    observable: str = Field(
        title="Observable.",
        description="sigma_x, sigma_y, sigma_z or a path to a 2x2 real matrix file.",
        default="sigma_z"
    )

    @field_validator("observable")
    def checkObservable(cls, v):
        """Check if the observable is a Pauli name or an existing file."""
        if v in ["sigma_x", "sigma_y", "sigma_z"]:
            return v
        return _checkFile(v)


class BathStateSettings(BaseModel, extra='forbid'):
    """Template for bath_state_settings in config file."""

    state: BathStateName = Field(
        title="Initial chain state.",
        description="It should be one of: vacuum, fock or thermal.",
        default=BathStateName.vacuum
    )
    occupations: Optional[List[int]] = Field(
        title="Fock occupations.",
        description="Occupation number of every chain site for state fock.",
        default=None
    )
    beta: Optional[float] = Field(
        title="Inverse temperature.",
        description="Inverse temperature for state thermal.",
        default=None
    )

    @field_validator("occupations")
    def checkOccupations(cls, v):
        """Check if occupations are non-negative."""
        if v is not None and any(n < 0 for n in v):
            raise ValueError(f"Occupations ({v}) should not be negative.")
        return v

    @model_validator(mode='after')
    def checkStateParameters(self):
        """Check that the state has its parameters."""
        if self.state == BathStateName.fock and not self.occupations:
            raise ValueError("State fock needs occupations.")
        if self.state == BathStateName.thermal and not (self.beta is not None and self.beta > 0):
            raise ValueError("State thermal needs a positive beta.")
        return self


class TruncationSettings(BaseModel, extra='forbid'):
    """Template for truncation_settings in config file."""

    chain_lengths: List[int] = Field(
        title="Chain lengths.",
        description="Chain lengths L to certify.",
        default=[2, 3, 4],
        min_length=1
    )
    fock_cutoffs: List[int] = Field(
        title="Fock cutoffs.",
        description="Uniform cutoffs m applied to every site.",
        default=[2, 4],
        min_length=1
    )
    site_cutoffs: Optional[List[List[int]]] = Field(
        title="Per-site cutoffs.",
        description="Explicit cutoff vectors, certified in addition to the uniform ones.",
        default=None
    )

    @field_validator("chain_lengths", "fock_cutoffs")
    def checkPositive(cls, v):
        """Check if all entries are at least 1."""
        if any(n < 1 for n in v):
            raise ValueError(f"All entries ({v}) should be at least 1.")
        if len(v) != len(set(v)):
            raise ValueError("Remove duplicates.")
        return sorted(v)

    @field_validator("site_cutoffs")
    def checkSiteCutoffs(cls, v):
        """Check if the per-site cutoffs are non-empty vectors of entries >= 1."""
        if v is not None:
            for cutoffs in v:
                if len(cutoffs) == 0 or any(m < 1 for m in cutoffs):
                    raise ValueError(f"Cutoff vector {cutoffs} should be non-empty with entries >= 1.")
        return v


class TimeSettings(BaseModel, extra='forbid'):
    """Template for time_settings in config file."""

    t_max: float = Field(
        title="Final time.",
        description="Last time of the uniform output grid.",
        default=4.0, ge=0.0
    )
    points: int = Field(
        title="Number of output times.",
        description="Points of the uniform grid including 0.",
        default=5, ge=2
    )


class NumericsSettings(BaseModel, extra='forbid'):
    """Template for numerics_settings in config file."""

    tol: float = Field(
        title="Propagation tolerance.",
        description="Error target of the Krylov propagation relative to the state norm.",
        default=1e-10, gt=0.0, lt=1.0
    )
    points_per_unit_time: int = Field(
        title="Quadrature density.",
        description="Minimal number of Simpson nodes per unit time.",
        default=64, ge=4
    )
    dimension_cap: int = Field(
        title="Dimension cap.",
        description="Largest admissible total Hilbert space dimension.",
        default=2 ** 24, ge=2
    )
    threads: int = Field(
        title="Threads.",
        description="Worker threads for the evaluation of the Fock truncation error.",
        default=1, ge=1
    )
    analytic_constants: Optional[StrictBool] = Field(
        title="Analytic constants.",
        description="Use c = w_max instead of the computed ||P X||^(1/2).",
        default=True
    )


class BathSettings(BaseModel, extra='forbid'):
    """Template for one entry of multi_bath_settings in config file."""

    mapping: MappingName = Field(title="Chain mapping.", description="", default=MappingName.particle)
    alpha: float = Field(title="Coupling strength.", description="", ge=0.0)
    s: float = Field(title="Spectral exponent.", description="", gt=0.0)
    omega_c: float = Field(title="Cutoff frequency.", description="", gt=0.0)
    chain_length: int = Field(title="Chain length.", description="Number of kept modes of this bath.", ge=1)
    coupling_norm: float = Field(title="Coupling norm.", description="||A_S^(m)|| of this bath.", default=0.5,
                                 ge=0.0)


class ResultsSettings(BaseModel, extra='forbid'):
    """Template for result_settings in config file."""

    results_dir: str = Field(
        title="Location of the output directory.",
        description="Define folder where all output data should be stored."
    )
    logging_level: Optional[str] = Field(
        title="Logging level.",
        description="Logging level, it should be one of: DEBUG, INFO, WARN, or ERROR.",
        default="INFO"
    )
    path_to_logfile: str = Field(
        title="Path to the logfile directory.",
        description="Path to the directory, where the logfile should be stored. Logfile name is chaincert.log"
    )
    export_hamiltonians: bool = Field(
        title="Export truncated Hamiltonians.",
        description="Write the truncated total Hamiltonian of every truncation as sparse triplets "
                    "(row col re im) next to the Fock bound results.",
        default=False
    )

    @field_validator('logging_level')
    def checkLogLevel(cls, v):
        """Check if logging level is correct."""
        if v not in ["DEBUG", "INFO", "WARN", "ERROR"]:
            raise ValueError("Logging level, it should be one of: DEBUG, INFO, WARN, or ERROR.")
        return v

    @field_validator('results_dir', 'path_to_logfile')
    def checkFolder(cls, v):
        """Check if folder location is defined - string should not be empty."""
        if v == "":
            raise ValueError("Empty string is not allowed.")
        if os.path.isabs(v) is False:
            v = os.path.realpath(v)
        return v


class Config(BaseModel, extra='forbid'):
    """Template for the chaincert configuration file."""

    spectral_chain_settings: SpectralChainSettings = Field(
        title="Spectral density and chain settings.", description=""
    )
    system_settings: SystemSettings = Field(
        title="System settings.", description="", default=SystemSettings()
    )
    bath_state_settings: BathStateSettings = Field(
        title="Initial chain state settings.", description="", default=BathStateSettings()
    )
    truncation_settings: TruncationSettings = Field(
        title="Truncation settings.", description="", default=TruncationSettings()
    )
    time_settings: TimeSettings = Field(
        title="Time settings.", description="", default=TimeSettings()
    )
    numerics_settings: NumericsSettings = Field(
        title="Numerics settings.", description="", default=NumericsSettings()
    )
    multi_bath_settings: List[BathSettings] = Field(
        title="Further baths.", description="Additional baths for the summed chain-length bound.", default=[]
    )
    result_settings: ResultsSettings = Field(
        title="Result Settings.", description=""
    )

    @model_validator(mode='before')
    def checkOccupationsFitChains(cls, v):
        """Check that Fock occupations cover the longest chain."""
        state = v.get("bath_state_settings", {}) or {}
        occupations = state.get("occupations")
        lengths = (v.get("truncation_settings", {}) or {}).get("chain_lengths", TruncationSettings().chain_lengths)
        if state.get("state") == "fock" and occupations is not None and len(occupations) < max(lengths):
            raise ValueError(f"Got {len(occupations)} occupations for chains of up to {max(lengths)} sites.")
        return v


def loadConfiguration(*, path: str, overrides: Optional[dict] = None) -> dict:
    """Load configuration json file.

    Parameters
    ----------
    path : str
        Path to the configuration json file.
    overrides : dict
        Values replacing keys of the file, grouped by section, e.g. {"numerics_settings": {"tol": 1e-9}}.

    Returns
    -------
    : dict
        A dictionary containing configurations.

    Raises
    ------
    FileNotFoundError
        Config file not found.
    IOError
        Invalid JSON file.
    ValueError
        Invalid value for configuration object.
    """
    try:
        with open(path) as config_fp:
            config = json.load(config_fp)
    except JSONDecodeError as e:
        raise IOError(f'Failed to load the configuration json file => {e}')
    for section, values in (overrides or {}).items():
        config.setdefault(section, {}).update(values)
    return Config(**config).model_dump(by_alias=True)
