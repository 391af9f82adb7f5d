# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.resources** ships the bundled Dublin defaults: the phrase
lexicon, the landmark list, the landmark thresholds and the defaults of the
synthetic generator.
"""

from importlib import resources


def path_of(name: str) -> str:
    return str(resources.files(__name__).joinpath(name))


LEXICON = "lexicon.txt"
LANDMARKS = "landmarks.csv"
THRESHOLDS = "thresholds.yml"
GENERATOR = "generator.yml"
