# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.predict** implements ``avm-flow predict`` command.
"""

from typing import Annotated

from avm_flow.api import arg, env
from avm_flow.commands.common import load_records, write_table
from avm_flow.fit import load_model, predict_frame


@arg.command("predict")
def main(
    model: Annotated[str, arg.Argument(help="Model saved by fit", meta="json")],
    input: Annotated[str, arg.Argument(help="Listing CSV file to value", meta="csv")],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    rt: env.Runtime,
):
    """Value listings with a saved model: point price and 50%/95% intervals"""

    run = env.RunConfig("predict", out, inputs={"model": model, "input": input})
    fitted = load_model(model)
    run.spec = fitted.spec.name
    run.postcode_mode = fitted.spec.postcode_mode

    predictions = predict_frame(fitted, load_records(rt, input))
    write_table(predictions, run.output("predictions.csv"))
    rt.message(f"predict: {len(predictions)} valuation(s)", level=env.Msg.STATUS)
    run.write_manifest()
