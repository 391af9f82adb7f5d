# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands** defines the built-in command set, one module per
pipeline stage, in the order they are listed by ``avm-flow --help``.
"""

from . import cv, extract, fit, knn, predict, surface, svt, sweep, synth

__all__ = ["cv", "extract", "fit", "knn", "predict", "surface", "svt", "sweep", "synth"]
