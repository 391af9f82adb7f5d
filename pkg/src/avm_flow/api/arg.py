# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.api.arg** is used by the commands to declare their CLI
arguments and to register themselves with :func:`command`.
"""

import argparse
import inspect
import typing
from dataclasses import dataclass, field

from avm_flow.base import inspect as _inspect

T = typing.TypeVar("T")
LazyArgument = typing.Union[T, typing.Callable[[], T]]


def _eval(arg: LazyArgument[T]) -> T:
    if callable(arg):
        return typing.cast(T, arg())
    return arg


class _Completable(typing.Protocol):
    completer: _inspect.Function


@dataclass
class Argument:
    help: LazyArgument[str] = ""
    names: LazyArgument[typing.List[str]] = field(default_factory=list)
    opt: typing.Optional[bool] = None
    meta: LazyArgument[typing.Optional[str]] = None
    action: LazyArgument[typing.Union[str, argparse.Action, None]] = None
    default: LazyArgument[typing.Optional[typing.Any]] = None
    choices: LazyArgument[typing.Optional[typing.List[str]]] = None
    type: typing.Optional[typing.Callable[[str], typing.Any]] = None
    completer: typing.Optional[_inspect.Function] = None

    def visit(self, parser: argparse.ArgumentParser, name: str):
        kwargs: typing.Dict[str, typing.Any] = {"dest": name, "required": not self.opt}
        for key, value in (
            ("help", _eval(self.help)),
            ("metavar", _eval(self.meta)),
            ("action", _eval(self.action)),
            ("default", _eval(self.default)),
            ("choices", _eval(self.choices)),
            ("type", self.type),
        ):
            if value is not None:
                kwargs[key] = value

        names = _eval(self.names) or [f"--{name.replace('_', '-')}"]
        action = parser.add_argument(*names, **kwargs)
        if self.completer:
            typing.cast(_Completable, action).completer = self.completer
        return action


class FlagArgument(Argument):
    def __init__(self, help: str = "", names: typing.Optional[typing.List[str]] = None):
        super().__init__(
            help=help, names=names or [], opt=True, action="store_true", default=False
        )


def int_list(text: str) -> typing.List[int]:
    """Parses ``3,5,7`` into a list of integers."""

    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as ex:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from ex


@dataclass
class _Command:
    name: str
    entry: typing.Optional[_inspect.Function]
    doc: typing.Optional[str]


_known_commands: typing.Dict[str, _Command] = {}
_autodoc = {
    "avm_flow.api.env.Runtime": "Configuration and console output, respecting ``--silent`` and ``--verbose``.",
}


def command(name: str):
    """Registers the decorated function as the ``name`` subcommand."""

    def wrap(function: object):
        entry = typing.cast(_inspect.Function, function)
        orig_doc = inspect.getdoc(entry)
        _known_commands[name] = _Command(name, entry, orig_doc)

        doc = orig_doc or ""
        if doc:
            doc += "\n\n"
        for param in _inspect.parameters(entry):
            help = ""
            for meta in param.metadata:
                if isinstance(meta, Argument):
                    help = _eval(meta.help)
                    break
            if not help and isinstance(param.type, type):
                help = _autodoc.get(f"{param.type.__module__}.{param.type.__name__}", "")
            doc += f":param {_inspect.type_name(param.type)} {param.name}: {help}\n"
        entry.__doc__ = doc
        return entry

    return wrap


def get_commands() -> typing.List[_Command]:
    return list(_known_commands.values())
