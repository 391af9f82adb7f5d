# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.synth** implements ``avm-flow synth`` command.
"""

from typing import Annotated, Optional

from avm_flow.api import arg, env
from avm_flow.synth import GeneratorConfig, generate, write_synthetic


@arg.command("synth")
def main(
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    seed: Annotated[int, arg.Argument(help="Random seed", type=int, default=0, opt=True)],
    n: Annotated[
        Optional[int],
        arg.Argument(help="Number of valid listings (default 5208)", type=int, meta="count"),
    ],
    config: Annotated[
        Optional[str],
        arg.Argument(help="YAML or JSON file overriding generator defaults", meta="file"),
    ],
    rt: env.Runtime,
):
    """Generate synthetic Dublin listings with their ground truth"""

    run = env.RunConfig("synth", out, seed=seed, options={"n": n})
    if config:
        run.inputs["config"] = config
    settings = GeneratorConfig.load(config, seed=seed, n_records=n)
    listings, truth = generate(settings)
    write_synthetic(listings, truth, run.output("listings.csv"), run.output("truth.json"))
    rt.message(
        f"synth: {len(listings)} listing(s), {len(truth.undersized_ids())} undersized",
        level=env.Msg.STATUS,
    )
    run.write_manifest()
