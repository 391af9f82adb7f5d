# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.__main__** allows *AVM Flow* to be called as Python component.
"""

from avm_flow.cli import main

main()
