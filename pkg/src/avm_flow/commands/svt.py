# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.svt** implements ``avm-flow svt`` command.
"""

from typing import Annotated

import pandas as pd

from avm_flow.api import arg, env
from avm_flow.base.error import InputError
from avm_flow.commands.common import write_table
from avm_flow.svt import read_surface, site_taxes


@arg.command("svt")
def main(
    surface: Annotated[str, arg.Argument(help="Surface CSV exported by surface", meta="csv")],
    sites: Annotated[
        str,
        arg.Argument(
            help="Sites CSV: id, latitude, longitude, site_size, n_apartments", meta="csv"
        ),
    ],
    baseline: Annotated[
        float, arg.Argument(help="Baseline tax, euro per acre", type=float, meta="euro")
    ],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    rt: env.Runtime,
):
    """Site value tax of each site, and per apartment"""

    run = env.RunConfig(
        "svt",
        out,
        inputs={"surface": surface, "sites": sites},
        options={"baseline": baseline},
    )
    try:
        site_frame = pd.read_csv(sites)
    except FileNotFoundError as ex:
        raise InputError(f"{sites}: file not found") from ex

    taxes = site_taxes(site_frame, read_surface(surface), baseline)
    write_table(taxes, run.output("svt.csv"))
    rt.message(f"svt: {len(taxes)} site(s)", level=env.Msg.STATUS)
    run.write_manifest()
