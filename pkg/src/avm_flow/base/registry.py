# Copyright (c) 2025 avm-flow contributors
# This code is licensed under MIT license (see LICENSE for details)

"""
The **avm_flow.base.registry** allows building extension points, with ability
to register the plugins with a decorator.
"""

import sys
import typing

T = typing.TypeVar("T")


class Registry(typing.Generic[T]):
    """
    Ordered registry of named plugins. The ``add`` decorator instantiates
    the decorated class and keeps the instance, so the registration order is
    the order in which plugins are listed.

    Known registries
    ................

    :data:`avm_flow.fit.specs.model_specs`
        :Argument: :class:`SpecTemplate <avm_flow.fit.specs.SpecTemplate>`
        :Used by: :func:`avm_flow.fit.specs.resolve_spec`

        Model specifications, from the basic hedonic regression up to the
        GAMs with postcode-change dummies.

    Example
    .......

    .. code-block:: python

        models = Registry[Template]("Template")

        @models.add
        class Basic(Template):
            name = "Basic"
    """

    name: str
    container: typing.List[T]

    def __init__(self, name: str):
        self.name = name
        self.container = []
        _debug_copies.append(self)

    def add(self, cls: typing.Type[T]):
        self.container.append(cls())
        return cls

    def get(self) -> typing.List[T]:
        return self.container

    def names(self) -> typing.List[str]:
        return [_name_of(item) for item in self.container]

    def find(self, name: str) -> typing.Optional[T]:
        for item in self.container:
            if _name_of(item) == name:
                return item
        return None


_debug_copies: typing.List[Registry] = []


def _name_of(item: typing.Any) -> str:
    return str(getattr(item, "name", item.__class__.__name__))


def verbose_info():
    for registry in _debug_copies:
        for item in registry.container:
            full_name = f"{item.__module__}.{item.__class__.__name__}"
            print(
                f"-- {registry.name}: adding `{full_name}` (name={_name_of(item)})",
                file=sys.stderr,
            )
