# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.extract** implements ``avm-flow extract`` command.
"""

from typing import Annotated

import pandas as pd

from avm_flow.api import arg, env
from avm_flow.commands.common import write_table
from avm_flow.dataio import clean, ingest, records_frame, write_rejects
from avm_flow.textmine import tabulate


@arg.command("extract")
def main(
    input: Annotated[str, arg.Argument(help="Listing CSV file", meta="csv")],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    rt: env.Runtime,
):
    """Validate, clean and featurize a listing CSV"""

    run = env.RunConfig("extract", out, inputs={"input": input})
    result = ingest(input)
    write_rejects(result.rejects, run.output("rejects.csv"))

    records = clean(result.listings, rt.lexicon(), rt.landmarks())
    write_table(records_frame(records), run.output("records.csv"))

    counts = tabulate(record.mined for record in records)
    write_table(
        pd.DataFrame(list(counts.items()), columns=["feature", "count"]),
        run.output("feature_counts.csv"),
    )
    rt.message(
        f"extract: {len(records)} record(s), {len(result.rejects)} rejected row(s), "
        f"{len(result.listings) - len(records)} below the size floor",
        level=env.Msg.STATUS,
    )
    run.write_manifest()
