# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.base** contains low-level helpers shared by the whole package:
exceptions and warnings, configuration loaders and the extension registry.
"""

from . import error, plugins, registry

__all__ = ["error", "plugins", "registry"]
