# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.sweep** implements ``avm-flow knots-sweep`` command.
"""

from typing import Annotated, List, Optional

from avm_flow.api import arg, completers, env
from avm_flow.commands.common import POSTCODE_CHOICES, load_records, model_spec, write_table
from avm_flow.eval import knot_sweep


@arg.command("knots-sweep")
def main(
    input: Annotated[str, arg.Argument(help="Listing CSV file", meta="csv")],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    k: Annotated[
        List[int],
        arg.Argument(
            help="Ascending, comma-separated spatial knot counts",
            type=arg.int_list,
            meta="k,k,...",
            completer=completers.knots_completer,
        ),
    ],
    spec: Annotated[
        str,
        arg.Argument(
            help="Model specification with a spatial term",
            default="GAM3",
            meta="name",
            opt=True,
            completer=completers.spec_completer,
        ),
    ],
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
    """Cross-validate a spatial model over a range of knot counts"""

    run = env.RunConfig(
        "knots-sweep",
        out,
        inputs={"input": input},
        spec=spec,
        postcode_mode=postcodes,
        seed=seed,
        options={"k": list(k), "folds": folds},
    )
    result = knot_sweep(
        load_records(rt, input),
        model_spec(rt, spec, postcodes, seed),
        k,
        folds=folds,
        seed=seed or 0,
        jobs=jobs,
    )
    write_table(result.table, run.output("sweep.csv"))
    rt.message(f"knots-sweep: elbow at k = {result.elbow}", level=env.Msg.STATUS)
    run.write_manifest()
