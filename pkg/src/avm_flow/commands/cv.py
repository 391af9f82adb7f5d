# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.cv** implements ``avm-flow cv`` command.
"""

from typing import Annotated, List, Optional

import pandas as pd

from avm_flow.api import arg, completers, env
from avm_flow.commands.common import POSTCODE_CHOICES, load_records, model_spec, write_table
from avm_flow.dataio import records_frame
from avm_flow.eval import EvalReport, band_table, kfold_cv, report_table
from avm_flow.fit.specs import specs_for_mode


@arg.command("cv")
def main(
    input: Annotated[str, arg.Argument(help="Listing CSV file", meta="csv")],
    spec: Annotated[
        str,
        arg.Argument(
            help='Model specification name, or "all" for every model of the postcode mode',
            meta="name",
            completer=completers.spec_completer,
        ),
    ],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    postcodes: Annotated[
        str,
        arg.Argument(
            help="Postcode handling", default="given", choices=POSTCODE_CHOICES, opt=True
        ),
    ],
    folds: Annotated[int, arg.Argument(help="Number of folds", type=int, default=5, opt=True)],
    seed: Annotated[Optional[int], arg.Argument(help="Random seed", type=int, default=0)],
    jobs: Annotated[
        int, arg.Argument(help="Folds fit in parallel", type=int, default=1, opt=True)
    ],
    rt: env.Runtime,
):
    """Cross-validate model specifications and report their accuracy"""

    run = env.RunConfig(
        "cv",
        out,
        inputs={"input": input},
        spec=spec,
        postcode_mode=postcodes,
        seed=seed,
        options={"folds": folds},
    )
    names = specs_for_mode(postcodes) if spec == "all" else [spec]
    model_defs = [model_spec(rt, name, postcodes, seed) for name in names]
    frame = records_frame(load_records(rt, input))

    reports: List[EvalReport] = []
    predictions: List[pd.DataFrame] = []
    for model_def in model_defs:
        rt.message(f"cv: {model_def.name} ({model_def.postcode_mode})", level=env.Msg.STATUS)
        report = kfold_cv(
            frame,
            model_def,
            folds=folds,
            seed=seed or 0,
            jobs=jobs,
            neighbours=rt.moran_neighbours,
        )
        reports.append(report)
        part = report.predictions.copy()
        part.insert(0, "model", model_def.name)
        predictions.append(part)

        bands = band_table(report.predictions["actual"], report.predictions["price"])
        bands.insert(0, "model", model_def.name)
        write_table(bands, run.output(f"bands_{model_def.name}.csv"))
        rt.message(
            f"  R2 {report.r2:.4f}, MdAPE {report.mdape:.2%}, "
            f"coverage95 {report.coverage95:.1%}, Moran's I {report.morans_i:.4f}",
            level=env.Msg.STATUS,
        )

    write_table(report_table(reports), run.output("report.csv"))
    write_table(pd.concat(predictions, ignore_index=True), run.output("predictions.csv"))
    run.write_manifest()
