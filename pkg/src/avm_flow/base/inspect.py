# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.base.inspect** reads the parameters of command functions,
unwrapping :py:class:`typing.Annotated` so the argument declarations can be
found in the metadata.
"""

import inspect
import typing


class Function(typing.Protocol):
    """Anything callable with keyword arguments, with a name."""

    __name__: str

    def __call__(self, **kwarg) -> typing.Any: ...


class Parameter(typing.NamedTuple):
    name: str
    #: The annotation, or the first argument of an ``Annotated`` one.
    type: typing.Any
    metadata: typing.Tuple[typing.Any, ...]


def parameters(call: Function) -> typing.List[Parameter]:
    result: typing.List[Parameter] = []
    for name, param in inspect.signature(call).parameters.items():
        annotation = param.annotation
        if typing.get_origin(annotation) is typing.Annotated:
            origin, *metadata = typing.get_args(annotation)
            result.append(Parameter(name, origin, tuple(metadata)))
        else:
            result.append(Parameter(name, annotation, ()))
    return result


def type_name(t: typing.Any) -> str:
    if t is type(None):
        return "None"
    if isinstance(t, type):
        return t.__name__

    origin = typing.get_origin(t)
    args = typing.get_args(t)
    if origin is typing.Union:
        return " | ".join(type_name(arg) for arg in args)
    if origin is None:
        return "?"
    name = getattr(origin, "__name__", str(origin))
    if args:
        return f"{name}[{', '.join(type_name(arg) for arg in args)}]"
    return name
