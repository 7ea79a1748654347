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
"""Utils module for chaincert."""

import json
import logging
import os
import sys
from logging import Logger

import numpy as np
import pandas as pd
import scipy.sparse as sp
from pydantic import BaseModel


def setupLogger(*, result_settings: dict, name: str = "chaincert") -> Logger:
    """Attach file and console handlers to the package logger.

    Parameters
    ----------
    result_settings : dict
        The result_settings section of a validated configuration.
    name : str
        Logger name.

    Returns
    -------
    : Logger
        Configured logger.
    """
    logging_dir = result_settings['path_to_logfile']
    if not os.path.exists(logging_dir):
        os.makedirs(logging_dir)
    logging_level = logging.getLevelName(result_settings['logging_level'])

    logFormatter = logging.Formatter("[%(levelname)-5.5s]  %(message)s")
    logger = logging.getLogger(name)
    closeLogger(logger=logger)

    fileHandler = logging.FileHandler("{0}/{1}.log".format(logging_dir, "chaincert"), mode='w')
    fileHandler.setFormatter(logFormatter)
    logger.addHandler(fileHandler)

    consoleHandler = logging.StreamHandler(sys.stdout)
    consoleHandler.setFormatter(logFormatter)
    logger.addHandler(consoleHandler)
    logger.setLevel(logging_level)
    return logger


def closeLogger(*, logger: Logger):
    """Flush, close and remove all handlers of a logger."""
    if logger.hasHandlers():
        for handler in logger.handlers[:]:
            handler.flush()
            handler.close()
            logger.removeHandler(handler)


def roundUpExp(log_value: float) -> float:
    """Exponentiate a log-space value, rounding the result up by one ulp.

    Parameters
    ----------
    log_value : float
        Natural logarithm of the quantity, -inf for an exact zero.

    Returns
    -------
    : float
        Upper bound of exp(log_value), strictly positive unless log_value is -inf.
    """
    if np.isneginf(log_value):
        return 0.0
    value = np.nextafter(np.exp(log_value), np.inf)
    if value == 0.0:
        value = np.nextafter(0.0, 1.0)
    return float(value)


def saveTableToDisk(*, table: pd.DataFrame, output_path: str):
    """Save a table as CSV with 17 significant digits.

    Parameters
    ----------
    table : pd.DataFrame
        Table to save.
    output_path : str
        Path to the CSV file.

    Raises
    ------
    Exception
        Failed to save the table to disk.
    """
    try:
        table.to_csv(output_path, index=False, float_format='%.17g', lineterminator='\n')
    except Exception as e:  # pragma: no cover
        raise Exception(f"Failed to save table to disk => {e}")


def saveJsonToDisk(*, data, output_path: str):
    """Save a dictionary or a pydantic model as indented JSON.

    Parameters
    ----------
    data : dict or BaseModel
        Content to save.
    output_path : str
        Path to the JSON file.

    Raises
    ------
    Exception
        Failed to save the JSON file to disk.
    """
    try:
        if isinstance(data, BaseModel):
            data = data.model_dump(mode='json')
        with open(output_path, 'w') as fp:
            json.dump(data, fp, indent=4)
    except Exception as e:  # pragma: no cover
        raise Exception(f"Failed to save json to disk => {e}")


def saveSparseTriplets(*, matrix: sp.spmatrix, output_path: str):
    """Save a sparse matrix as text triplets.

    The file starts with a comment line holding the shape, followed by one line
    ``row col re im`` per stored entry in row-major order, zero-based indices and
    17 significant digits.

    Parameters
    ----------
    matrix : sp.spmatrix
        Matrix to save.
    output_path : str
        Path to the text file.

    Raises
    ------
    Exception
        Failed to save the triplets to disk.
    """
    try:
        coo = sp.coo_matrix(matrix)
        coo.sum_duplicates()
        order = np.lexsort((coo.col, coo.row))
        data = coo.data.astype(complex)[order]
        table = pd.DataFrame(dict(row=coo.row[order], col=coo.col[order], re=data.real, im=data.imag))
        with open(output_path, 'w') as fp:
            fp.write(f"# shape {coo.shape[0]} {coo.shape[1]}\n")
            table.to_csv(fp, sep=' ', index=False, header=False, float_format='%.17g', lineterminator='\n')
    except Exception as e:  # pragma: no cover
        raise Exception(f"Failed to save sparse triplets to disk => {e}")
