# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.base.plugins** loads configuration documents, picking the
parser from the file extension.
"""

import json
import os
from typing import Any, Optional, cast

import yaml

from avm_flow.base.error import ConfigError


def load_yaml(filename: str):
    with open(filename, encoding="UTF-8") as src:
        return cast(dict, yaml.safe_load(src))


def load_json(filename: str):
    with open(filename, encoding="UTF-8") as src:
        return cast(dict, json.load(src))


LOADERS = {
    ".json": load_json,
    ".yml": load_yaml,
    ".yaml": load_yaml,
}


def load_data(filename: str) -> dict:
    """
    Loads the first readable sibling of ``filename``, trying its own
    extension first and then every known one. Missing files give an empty
    dictionary, so optional config layers can be merged blindly.
    """

    prefix, ext = os.path.splitext(filename)
    candidates = [filename] if ext.lower() in LOADERS else []
    candidates.extend(prefix + new_ext for new_ext in LOADERS)

    for candidate in candidates:
        if not os.path.isfile(candidate):
            continue
        loader = LOADERS[os.path.splitext(candidate)[1].lower()]
        try:
            data = loader(candidate)
        except (OSError, ValueError, yaml.YAMLError) as ex:
            raise ConfigError(f"{candidate}: {ex}") from ex
        return data if isinstance(data, dict) else {}

    return {}


def load_document(filename: str) -> Any:
    """Loads a file which must exist; used for user-named config files."""

    ext = os.path.splitext(filename)[1].lower()
    loader = LOADERS.get(ext)
    if loader is None:
        raise ConfigError(f"{filename}: unknown config format '{ext}'")
    try:
        return loader(filename)
    except FileNotFoundError as ex:
        raise ConfigError(f"{filename}: file not found") from ex
    except (OSError, ValueError, yaml.YAMLError) as ex:
        raise ConfigError(f"{filename}: {ex}") from ex


def merge_dicts(dst: dict, src: dict):
    """Merges ``src`` into ``dst``, recursing into nested dictionaries."""

    for key in src:
        if key not in dst:
            dst[key] = src[key]
            continue

        src_val = src[key]
        dst_val = dst[key]

        if isinstance(src_val, dict):
            if isinstance(dst_val, dict):
                merge_dicts(dst_val, src_val)
                continue

        dst[key] = src_val


def get_path(data: dict, key: str, default: Optional[Any] = None) -> Any:
    ctx: Any = data
    for step in key.split("."):
        if not isinstance(ctx, dict):
            return default
        ctx = ctx.get(step)
        if ctx is None:
            return default
    return ctx
