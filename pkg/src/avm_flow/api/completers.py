# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.api.completers** defines :py:mod:`argcomplete` functions for
``-C``, ``--spec`` and ``--k``.
"""

import os

from avm_flow.fit.specs import spec_names


def cd_completer(prefix, **kwargs):
    target_dir = os.path.dirname(prefix)
    incomplete_part = os.path.basename(prefix)
    try:
        names = os.listdir(target_dir or ".")
    except OSError:
        return

    for name in names:
        full = os.path.join(target_dir, name)
        if name.startswith(incomplete_part) and os.path.isdir(full):
            yield f"{full}{os.sep}"


def spec_completer(prefix: str, **kwargs):
    for name in [*spec_names(), "all"]:
        if name.lower().startswith(prefix.lower()):
            yield name


def knots_completer(prefix: str, **kwargs):
    """Completes the last item of a comma-separated list of knot counts."""

    head, _, current = prefix.rpartition(",")
    start = f"{head}," if head else ""
    for k in ("25", "50", "75", "100", "150", "200"):
        if k.startswith(current):
            yield start + k
