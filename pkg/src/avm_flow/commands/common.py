# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.common** holds what the commands share: reading and
cleaning the input listings with the configured lexicon and landmarks,
resolving a model name with the configured knots, and writing tables.
"""

from typing import List, Optional

import pandas as pd

from avm_flow.api.env import Msg, Runtime
from avm_flow.dataio import PropertyRecord, clean, ingest
from avm_flow.fit.specs import ModelSpec, resolve_spec

POSTCODE_CHOICES = ["given", "corrected", "corrected+changes"]


def load_records(rt: Runtime, path: str) -> List[PropertyRecord]:
    result = ingest(path)
    if result.rejects:
        rt.message(f"{path}: {len(result.rejects)} row(s) rejected", level=Msg.STATUS)
    records = clean(result.listings, rt.lexicon(), rt.landmarks())
    rt.message(
        f"{path}: {len(records)} of {len(result.listings)} listing(s) kept",
        level=Msg.DEBUG,
    )
    return records


def model_spec(rt: Runtime, name: str, postcodes: str, seed: Optional[int]) -> ModelSpec:
    return resolve_spec(
        name,
        postcodes,
        knots=rt.knots,
        rho=rt.spatial_rho,
        seed=seed or 0,
    )


def write_table(frame: pd.DataFrame, path: str):
    frame.to_csv(path, index=False, encoding="UTF-8", lineterminator="\n")
