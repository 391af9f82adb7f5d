# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.knn** implements ``avm-flow knn`` command.
"""

from typing import Annotated, List

from avm_flow.api import arg, env
from avm_flow.commands.common import load_records, write_table
from avm_flow.knn import KS, knn_evaluate


@arg.command("knn")
def main(
    input: Annotated[str, arg.Argument(help="Listing CSV file", meta="csv")],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    k: Annotated[
        List[int],
        arg.Argument(
            help="Comma-separated neighbour counts",
            type=arg.int_list,
            default=list(KS),
            meta="k,k,...",
            opt=True,
        ),
    ],
    rt: env.Runtime,
):
    """Leave-one-out nearest-neighbour baseline"""

    run = env.RunConfig("knn", out, inputs={"input": input}, options={"k": list(k)})
    report = knn_evaluate(load_records(rt, input), k)
    write_table(report.table, run.output("knn.csv"))
    write_table(report.estimates, run.output("knn_estimates.csv"))
    if report.excluded:
        rt.message(
            f"knn: {report.excluded} record(s) without a same-type neighbour",
            level=env.Msg.STATUS,
        )
    run.write_manifest()
