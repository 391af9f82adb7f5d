# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.api** contains public APIs for writing commands: argument
declarations, completers and the runtime environment.
"""

from . import arg, completers, env

__all__ = ["arg", "completers", "env"]
