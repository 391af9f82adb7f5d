# PYTHON_ARGCOMPLETE_OK

# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.cli** provides command-line entry for *AVM Flow*.
"""

import argparse
import os
import sys
from typing import List, Optional

import argcomplete

from avm_flow.api import env
from avm_flow.base.error import AvmError
from avm_flow.cli import argument

__all__ = ["argument", "main"]


def main(argv: Optional[List[str]] = None):
    """Entry point for ``avm-flow`` tool."""
    try:
        __main(argv)
    except KeyboardInterrupt:
        sys.exit(1)
    except AvmError as ex:
        message = " ".join(ex.message.split())
        print(f"avm-flow: error: {ex.code}: {message}", file=sys.stderr)
        sys.exit(1)


def _change_dir(argv: Optional[List[str]]):
    root = argparse.ArgumentParser(
        prog="avm-flow",
        usage="avm-flow [-h] [--version] [-C [dir]] command ...",
        add_help=False,
    )
    root.add_argument("-C", dest="cd", nargs="?")

    args, _ = root.parse_known_args(argv)
    if args.cd:
        os.chdir(args.cd)


def __main(argv: Optional[List[str]]):
    _change_dir(argv)

    flow_cfg = env.AvmConfig(root=".")
    parser = argument.build_argparser(flow_cfg)
    argcomplete.autocomplete(parser)
    args = parser.parse_args(argv)

    raise SystemExit(parser.find_and_run_command(args))
