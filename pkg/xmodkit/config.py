"""
Configuration management for xmodkit.

Provides declarative configuration loading from environment variables
(``XMODKIT_*``) and task specification files (YAML or JSON).
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Literal, Optional

import yaml
from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import InputError

# Library-wide defaults; settings below start from these.
DEFAULT_BUDGET = 2**20
MAX_GROUP_ORDER = 64
MAX_AUTOMORPHISM_ORDER = 16
MAX_CATEGORY_SIZE = 256

COMMANDS = (
    "validate",
    "derive",
    "reduce",
    "obstruction",
    "classify",
    "enumerate",
    "schreier-check",
    "roundtrip",
    "check",
)


class XmodkitSettings(BaseSettings):
    """Settings for the library and the command line front end.

    ``XMODKIT_BUDGET`` overrides the enumeration budget, and so on for
    every field.
    """

    model_config = SettingsConfigDict(
        env_prefix="XMODKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    version: str = Field("1.0.0", description="xmodkit version")

    # Size limits
    budget: int = Field(DEFAULT_BUDGET, description="Max candidates for exhaustive enumerations")
    max_group_order: int = Field(MAX_GROUP_ORDER, description="Max order of a stored Cayley table")
    max_automorphism_order: int = Field(
        MAX_AUTOMORPHISM_ORDER, description="Max order for automorphism/isomorphism search"
    )
    max_category_size: int = Field(MAX_CATEGORY_SIZE, description="Max |B|*|D| for materialized Gr-categories")

    # Reproducibility
    seed: int = Field(0, description="Seed for stick choice and randomized batteries")

    # Observability
    log_level: str = Field("WARNING", description="Logging level")
    log_json: bool = Field(True, description="Emit JSON log lines")


class TaskSpec(BaseModel):
    """A single batch task for the command line front end.

    ``inputs`` maps a role (``xm``, ``psi``) to a document reference: a file
    path or ``builtin:<name>``.
    """

    command: Literal[
        "validate",
        "derive",
        "reduce",
        "obstruction",
        "classify",
        "enumerate",
        "schreier-check",
        "roundtrip",
        "check",
    ]
    inputs: Dict[str, str] = Field(default_factory=dict, description="Role -> document reference")
    budget: Optional[int] = Field(None, description="Overrides the settings budget")
    seed: int = Field(0, description="Stick seed")
    output: Literal["text", "json"] = "text"
    expect_nonempty: bool = Field(False, description="Exit 1 when a classification comes back empty")
    slow: bool = Field(False, description="Enable optional slow cross-checks")

    @classmethod
    def from_file(cls, filepath: Path | str) -> TaskSpec:
        """Load a task spec from a YAML or JSON file.

        Args:
            filepath: Path to the spec file

        Returns:
            TaskSpec instance

        Raises:
            FileNotFoundError: If file doesn't exist
            InputError: If the file is empty or does not match the schema
        """
        path = Path(filepath)
        if not path.exists():
            raise FileNotFoundError(f"Task spec not found: {filepath}")

        data = load_mapping(path)
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            raise InputError(f"Invalid task spec {filepath}: {exc}") from exc


def load_mapping(path: Path | str) -> Dict[str, Any]:
    """Read a JSON or YAML document that must contain a mapping.

    Raises:
        InputError: If the document is empty, unparsable or not a mapping
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()

    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InputError(f"Cannot parse {path}: {exc}") from exc

    if not data:
        raise InputError(f"Empty or invalid document in {path}")
    if not isinstance(data, dict):
        raise InputError(f"Expected a mapping at the top level of {path}")
    return data


def load_settings(**overrides: Any) -> XmodkitSettings:
    """Create settings from the environment, then apply explicit overrides.

    ``None`` overrides are ignored so CLI flags that were not given fall
    through to the environment.
    """
    settings = XmodkitSettings()
    updates = {key: value for key, value in overrides.items() if value is not None}
    if updates:
        settings = settings.model_copy(update=updates)
    return settings
