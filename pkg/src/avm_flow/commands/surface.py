# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.commands.surface** implements ``avm-flow surface`` command.
"""

from typing import Annotated, Optional

from avm_flow.api import arg, env
from avm_flow.fit import load_model
from avm_flow.svt import data_bbox, scaling_field, surface, write_surface


@arg.command("surface")
def main(
    model: Annotated[str, arg.Argument(help="Model saved by fit", meta="json")],
    out: Annotated[str, arg.Argument(help="Output directory", meta="dir")],
    resolution: Annotated[
        Optional[float], arg.Argument(help="Lattice spacing, km", type=float, meta="km")
    ],
    bands: Annotated[
        Optional[int],
        arg.Argument(help="Number of quantile bands, 0 for raw scalings", type=int),
    ],
    rt: env.Runtime,
):
    """Export the location-value and scaling lattice of a spatial model"""

    resolution = rt.svt_resolution if resolution is None else resolution
    bands = rt.svt_bands if bands is None else bands
    run = env.RunConfig(
        "surface",
        out,
        inputs={"model": model},
        options={"resolution": resolution, "bands": bands},
    )
    fitted = load_model(model)
    run.spec = fitted.spec.name
    run.postcode_mode = fitted.spec.postcode_mode

    bbox = None
    if fitted.recipe.spatial is not None:
        bbox = data_bbox(fitted, rt.svt_padding)
    field = scaling_field(surface(fitted, bbox=bbox, resolution=resolution))
    write_surface(field, run.output("surface.csv"), run.output("surface.json"), bands=bands)
    rt.message(
        f"surface: {field.surface.shape[0]} x {field.surface.shape[1]} cells, "
        f"max scaling {field.scaling.max():.3f}",
        level=env.Msg.STATUS,
    )
    run.write_manifest()
