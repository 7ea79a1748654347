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
"""Exceptions raised by chaincert."""


class ChainCertError(Exception):
    """Base class of all chaincert failures."""


class NonMonotoneDispersion(ChainCertError, ValueError):
    """Dispersion relation is not strictly monotone and cannot be inverted."""


class GridTooCoarse(ChainCertError, ValueError):
    """Sample grid has too few points."""


class QuadratureUnstable(ChainCertError, ArithmeticError):
    """Discretized Stieltjes procedure lost orthogonality."""


class DimensionMismatch(ChainCertError, ValueError):
    """Matrix or vector dimensions do not agree."""


class WrongCase(ChainCertError, ValueError):
    """Bound requested outside the regime it is valid for."""


class DimensionOverflow(ChainCertError, MemoryError):
    """Truncated Hilbert space exceeds the configured dimension cap."""


class NoConvergence(ChainCertError, ArithmeticError):
    """Adaptive time stepping could not meet the requested tolerance."""


class UnsupportedState(ChainCertError, ValueError):
    """Initial bath state not supported by the requested operation."""
