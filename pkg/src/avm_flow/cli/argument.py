# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.cli.argument** provides command-line builders and runners,
supporting the functions decorated with :func:`@arg.command()
<avm_flow.api.arg.command>`.
"""

import argparse
import typing
from dataclasses import dataclass

from avm_flow import __version__
from avm_flow.api import arg, completers, env
from avm_flow.base import inspect as _inspect
from avm_flow.base import registry


class Subparsers(typing.Protocol):
    def add_parser(*args, **kwargs) -> argparse.ArgumentParser: ...


@dataclass
class AnnotatedArgument:
    name: str
    argument: arg.Argument

    def argparse_visit(self, parser: argparse.ArgumentParser):
        return self.argument.visit(parser, self.name)


@dataclass
class Command:
    name: str
    doc: str
    entry: _inspect.Function
    annotated: typing.List[AnnotatedArgument]
    runtime: typing.Optional[str]

    def argparse_visit(self, subparsers: Subparsers):
        parser = subparsers.add_parser(
            self.name,
            help=self.doc.split("\n\n")[0],
            description=self.doc,
            add_help=False,
        )
        _argparse_runtime_visit(parser)
        for argument in self.annotated:
            argument.argparse_visit(parser)

    def run(self, args: argparse.Namespace, rt: env.Runtime):
        kwargs = {item.name: getattr(args, item.name, None) for item in self.annotated}
        if self.runtime is not None:
            kwargs[self.runtime] = rt

        with rt.reporting_warnings():
            result = self.entry(**kwargs)
        return 0 if result is None else result


class Parser(argparse.ArgumentParser):
    flow: env.AvmConfig
    menu: typing.List[Command]

    def find_and_run_command(self, args: argparse.Namespace):
        rt = env.Runtime(args, self.flow)

        if rt.verbose:
            verbose_info(self.menu)
            registry.verbose_info()

        command = next((item for item in self.menu if item.name == args.command), None)
        if command is not None:
            return command.run(args, rt)

        lines = ["the command arguments are required; known commands:", ""]
        for item in self.menu:
            lines.append(f"  - {item.name}: {item.doc.split(chr(10))[0]}")
        self.error("\n".join(lines))


def build_argparser(flow_cfg: env.AvmConfig) -> Parser:
    parser = Parser(
        prog="avm-flow",
        description="Geo-spatial hedonic property valuation, automated",
        add_help=False,
    )
    parser.add_argument(
        "-h", "--help", action="help", help="Show this help message and exit"
    )
    parser.add_argument(
        "-v",
        "--version",
        action="version",
        default=argparse.SUPPRESS,
        version=f"%(prog)s version {__version__}",
        help="Show avm-flow's version and exit",
    )
    parser.add_argument(
        "-C",
        metavar="dir",
        nargs="?",
        help="Run as if avm-flow was started in <dir> instead of the current "
        "working directory. This directory must exist.",
    ).completer = completers.cd_completer  # type: ignore

    parser.flow = flow_cfg
    parser.menu = [_build_command(item) for item in arg.get_commands()]

    subparsers = parser.add_subparsers(
        dest="command", metavar="command", help="Known command name, see below"
    )
    for command in parser.menu:
        command.argparse_visit(typing.cast(Subparsers, subparsers))
    return parser


def _build_command(cmd: arg._Command) -> Command:
    annotated: typing.List[AnnotatedArgument] = []
    runtime: typing.Optional[str] = None
    entry = typing.cast(_inspect.Function, cmd.entry)

    for param in _inspect.parameters(entry):
        if param.type is env.Runtime:
            runtime = param.name
            continue
        metadata = next(
            (meta for meta in param.metadata if isinstance(meta, arg.Argument)), None
        )
        if metadata is None:
            continue
        if metadata.opt is None:
            is_union = typing.get_origin(param.type) is typing.Union
            metadata.opt = is_union and type(None) in typing.get_args(param.type)
        annotated.append(AnnotatedArgument(param.name, metadata))

    return Command(
        name=cmd.name,
        doc=cmd.doc or "",
        entry=entry,
        annotated=annotated,
        runtime=runtime,
    )


def _argparse_runtime_visit(parser: argparse.ArgumentParser):
    parser.add_argument(
        "-h",
        "--help",
        action="help",
        default=argparse.SUPPRESS,
        help="Show this help message and exit",
    )

    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "--silent",
        action="store_true",
        required=False,
        help="Remove most of the output",
    )
    verbosity.add_argument(
        "--verbose",
        action="store_true",
        required=False,
        help="Add even more output",
    )


def verbose_info(commands: typing.List[Command]):
    for command in commands:
        print(
            f"-- Command: adding `{command.name}` from "
            f"`{command.entry.__module__}.{command.entry.__name__}(...)`"
        )
