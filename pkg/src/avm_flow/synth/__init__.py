# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.synth** generates synthetic Dublin sales with a known truth,
written in the listing CSV format next to a ground-truth JSON.
"""

from .config import GeneratorConfig
from .generate import GroundTruth, TrueSurface, generate, write_synthetic
from .regions import CENTROIDS, STUDY_BBOX, RegionMap

__all__ = [
    "CENTROIDS",
    "GeneratorConfig",
    "GroundTruth",
    "RegionMap",
    "STUDY_BBOX",
    "TrueSurface",
    "generate",
    "write_synthetic",
]
