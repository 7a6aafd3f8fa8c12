"""Named example diagrams shipped as PD files under ``data/``."""

from __future__ import annotations

from importlib import resources

from .diagram import DiagramError, LinkDiagram, parse_pd

BUILTIN_NAMES = (
    "trefoil_D22",
    "mirror6_1_D25",
    "whitehead",
    "borromean",
    "8_19",
    "11n61_insertion",
)


def builtin_text(name: str) -> str:
    if name not in BUILTIN_NAMES:
        raise DiagramError(f"unknown built-in {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    return resources.files("khtorsion").joinpath("data").joinpath(f"{name}.pd").read_text()


def builtin(name: str) -> LinkDiagram:
    return parse_pd(builtin_text(name), name=name)


def all_builtins() -> dict[str, LinkDiagram]:
    return {name: builtin(name) for name in BUILTIN_NAMES}
