# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.fit** implements ``avm-flow fit`` command.
"""

from typing import Annotated, List, Optional

import numpy as np
import pandas as pd

from avm_flow.api import arg, completers, env
from avm_flow.commands.common import POSTCODE_CHOICES, load_records, model_spec, write_table
from avm_flow.dataio import records_frame
from avm_flow.fit import coefficient_scalings, fit_model, save_model, smooth_effects

GRID_POINTS = 50


@arg.command("fit")
def main(
    input: Annotated[str, arg.Argument(help="Listing CSV file", meta="csv")],
    spec: Annotated[
        str,
        arg.Argument(
            help="Model specification name", meta="name", completer=completers.spec_completer
        ),
    ],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    postcodes: Annotated[
        str,
        arg.Argument(
            help="Postcode handling", default="given", choices=POSTCODE_CHOICES, opt=True
        ),
    ],
    seed: Annotated[Optional[int], arg.Argument(help="Random seed", type=int, default=0)],
    rt: env.Runtime,
):
    """Fit a model specification and save it with its scalings"""

    run = env.RunConfig(
        "fit", out, inputs={"input": input}, spec=spec, postcode_mode=postcodes, seed=seed
    )
    model_def = model_spec(rt, spec, postcodes, seed)
    records = load_records(rt, input)
    model = fit_model(records, model_def)

    save_model(model, run.output("model.json"))
    write_table(coefficient_scalings(model), run.output("scalings.csv"))

    frame = records_frame(records)
    effects: List[pd.DataFrame] = []
    for smooth in model.recipe.smooths:
        values = frame[smooth.covariate].to_numpy(dtype=float)
        grid = np.linspace(values.min(), values.max(), GRID_POINTS)
        part = smooth_effects(model, smooth.covariate, grid)
        part.insert(0, "term", smooth.covariate)
        effects.append(part)
    if effects:
        write_table(pd.concat(effects, ignore_index=True), run.output("smooths.csv"))

    rt.message(
        f"fit: {model.spec.name} ({model.spec.postcode_mode}) on {model.n} record(s), "
        f"{model.recipe.n_columns} column(s), GCV {model.gcv:.6g}",
        level=env.Msg.STATUS,
    )
    for block, edf in model.edf.items():
        rt.message(f"  edf {block}: {edf:.2f}", level=env.Msg.DEBUG)
    run.write_manifest()
