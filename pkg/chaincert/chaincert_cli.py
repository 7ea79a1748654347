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


"""Console script for chaincert."""

import argparse
import os
import sys

from chaincert.chaincert import COMMANDS, chainCert
from chaincert.config import loadConfiguration
from chaincert.exceptions import DimensionOverflow, NoConvergence, QuadratureUnstable

EXIT_CONFIG = 2
EXIT_DIMENSION = 3
EXIT_NUMERICS = 4


def getArgparser():
    """Get a console argument parser for chaincert."""
    parser = argparse.ArgumentParser(
        prog='chaincert',
        epilog='Certified truncation error bounds for chain-mapped spin-boson simulations. Powered by FERN.Lab'
    )
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='COMMAND')
    helps = {"chain-coeffs": "Write the chain coefficients of the longest configured chain.",
             "spatial-bound": "Write the chain-length bound over the (L, t) sweep.",
             "fock-bound": "Write the Fock truncation error and bound per truncation.",
             "certify": "Write the total error certificates."}
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=helps[command])
        sub.add_argument('-f', '--config',
                         type=str,
                         required=True,
                         help="Path to the config.json file",
                         metavar="FILE")
        sub.add_argument('--out', type=str, default=None, help="Results directory, overrides results_dir",
                         metavar="DIR")
        sub.add_argument('--threads', type=int, default=None, help="Worker threads, overrides threads",
                         metavar="N")
        sub.add_argument('--tol', type=float, default=None, help="Propagation tolerance, overrides tol",
                         metavar="X")
    return parser


def configFromArgs(args: argparse.Namespace) -> dict:
    """Load the config file with the command line overrides applied."""
    overrides = {}
    if args.out is not None:
        overrides["result_settings"] = {"results_dir": args.out}
    numerics = {key: value for key, value in [("threads", args.threads), ("tol", args.tol)] if value is not None}
    if numerics:
        overrides["numerics_settings"] = numerics
    return loadConfiguration(path=os.path.abspath(args.config), overrides=overrides)


def main(argv=None, prog_name="chaincert"):
    """Run a chaincert command from the console.

    Parameters
    ----------
    argv : list
        Arguments, sys.argv[1:] by default.
    prog_name : str
        Name used in messages.

    Returns
    -------
    : int
        0 on success.

    Raises
    ------
    SystemExit
        2 for configuration errors, 3 if the dimension cap is exceeded, 4 for numerical failures and
        1 for any other failure.
    """
    args = getArgparser().parse_args(argv)
    try:
        config = configFromArgs(args)
        chainCert(config_dict=config, command=args.command)
    except DimensionOverflow as e:
        print(f'Exit in {prog_name} function\n{e}', file=sys.stderr)
        raise SystemExit(EXIT_DIMENSION)
    except (NoConvergence, QuadratureUnstable) as e:
        print(f'Exit in {prog_name} function\n{e}', file=sys.stderr)
        raise SystemExit(EXIT_NUMERICS)
    except (ValueError, OSError) as e:
        print(f'Exit in {prog_name} function\n{e}', file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    except Exception as e:
        raise SystemExit(f'Exit in {prog_name} function\n'
                         f'{e}')

    print(f"{prog_name} {args.command} succeeded.")
    return 0


if __name__ == "__main__":  # pragma: no cover
    main(prog_name="chaincert")
