"""Configuration handling for the solver and its command line."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import tomli
from pydantic import BaseModel, ConfigDict, Field

from .enums import StrEnum


class OutputFormat(StrEnum):
    """Rendering of command output."""

    TEXT = "text"
    JSON = "json"
    DOT = "dot"


class GraspConfig(BaseModel):
    """Solver and oracle settings."""

    model_config = ConfigDict(populate_by_name=True)

    max_models: int | None = Field(None, alias="max-models", ge=1)
    verify: bool = Field(default=True, alias="verify")
    constraint_prune: bool = Field(default=False, alias="constraint-prune")
    cycle_cap: int = Field(default=1_000_000, alias="cycle-cap", ge=1)
    oracle_atom_cap: int = Field(default=20, alias="oracle-atom-cap", ge=0)
    jobs: int = Field(default=1, alias="jobs", ge=1)
    output_format: OutputFormat = Field(default=OutputFormat.TEXT, alias="format")


def read_toml_config(rootdir: Path | None = None) -> dict[str, Any]:
    """Read the [tool.grasp] section from pyproject.toml.

    Args:
        rootdir: Project root directory. Falls back to CWD if not provided.

    """
    toml_path = (rootdir or Path.cwd()) / "pyproject.toml"
    try:
        with toml_path.open("rb") as f:
            toml_config = tomli.load(f)
            return toml_config.get("tool", {}).get("grasp", {})  # type: ignore[no-any-return]
    except (FileNotFoundError, tomli.TOMLDecodeError):
        return {}


_CLI_OPTIONS = {
    "max_models": "max_models",
    "constraint_prune": "constraint_prune",
    "cycle_cap": "cycle_cap",
    "oracle_atom_cap": "oracle_atom_cap",
    "jobs": "jobs",
    "format": "output_format",
}

_UNSET: tuple[Any, ...] = (None, [], False)


def read_cli_config(args: Any) -> dict[str, Any]:
    """Read the options actually given on the command line."""
    config: dict[str, Any] = {}
    for opt, key in _CLI_OPTIONS.items():
        value = getattr(args, opt, None)
        if value not in _UNSET:
            config[key] = value

    if getattr(args, "no_verify", False):
        config["verify"] = False

    return config


def get_grasp_config(args: Any = None, rootdir: Path | None = None) -> GraspConfig:
    """Build final config by merging sources. Priority: CLI > pyproject.toml > defaults."""
    toml_config = {key.replace("-", "_"): value for key, value in read_toml_config(rootdir).items()}
    if "format" in toml_config:
        toml_config["output_format"] = toml_config.pop("format")
    cli_config = read_cli_config(args) if args is not None else {}
    return GraspConfig.model_validate({**toml_config, **cli_config})
