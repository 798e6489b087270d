"""
Document schemas for groups, crossed modules, cochains and extensions.

These are the JSON/YAML interchange formats. Every record here is plain
data; the domain classes convert to and from them (``FiniteGroup.from_record``,
``CrossedModule.to_record`` and so on).
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, Field, ValidationError, model_validator

from .config import load_mapping
from .errors import InputError

RecordT = TypeVar("RecordT", bound=BaseModel)


class GroupRecord(BaseModel):
    """A finite group as a Cayley table; identity must be index 0."""

    name: str = Field("G", description="Display name")
    order: int = Field(..., ge=1, description="Number of elements")
    table: List[List[int]] = Field(..., description="table[i][j] = i*j")

    @model_validator(mode="after")
    def _check_shape(self) -> GroupRecord:
        if len(self.table) != self.order or any(len(row) != self.order for row in self.table):
            raise ValueError(f"table must be {self.order}x{self.order}")
        return self


class CrossedModuleRecord(BaseModel):
    """A crossed module (B, D, d, theta); theta[x] is the image table of theta_x."""

    name: Optional[str] = Field(None, description="Display name")
    B: GroupRecord
    D: GroupRecord
    d: List[int] = Field(..., description="Images of d: B -> D")
    theta: List[List[int]] = Field(..., description="One automorphism table of B per element of D")


class PsiRecord(BaseModel):
    """A homomorphism psi: Q -> Coker d.

    Cosets of Im d are numbered by increasing smallest member, the identity
    coset first.
    """

    Q: GroupRecord
    images: List[int] = Field(..., description="psi(u) for each element u of Q")


class CochainRecord(BaseModel):
    """A normalized cochain; keys are comma-joined argument tuples, missing keys mean 0."""

    degree: int = Field(..., ge=0, le=4)
    values: Dict[str, int] = Field(default_factory=dict)


class ModuleRecord(BaseModel):
    """An abelian group A with an action of Q; action[u] is the automorphism table of u."""

    Q: GroupRecord
    A: GroupRecord
    action: List[List[int]]


class ReducedRecord(BaseModel):
    """A reduced Gr-category of type (pi0, pi1, k)."""

    pi0: GroupRecord
    pi1: ModuleRecord
    k: CochainRecord


class ExtensionRecord(BaseModel):
    """An extension (E, j, p, eps) of B by Q of the type of a crossed module."""

    E: GroupRecord
    Q: GroupRecord
    j: List[int] = Field(..., description="Images of j: B -> E")
    p: List[int] = Field(..., description="Images of p: E -> Q")
    eps: List[int] = Field(..., description="Images of eps: E -> D")
    factor_set: Optional[CochainRecord] = Field(None, description="f: Q^2 -> B of the crossed-product form")


def parse_record(model: Type[RecordT], data: Any, source: str = "document") -> RecordT:
    """Validate raw data against a record model.

    Raises:
        InputError: If the data does not match the schema
    """
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        raise InputError(f"Invalid {model.__name__} in {source}: {exc}") from exc


def load_record(model: Type[RecordT], path: Path | str) -> RecordT:
    """Load a JSON or YAML file into a record model.

    Raises:
        FileNotFoundError: If the file doesn't exist
        InputError: If the file is empty or does not match the schema
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Document not found: {path}")
    return parse_record(model, load_mapping(path), str(path))


def format_key(args: tuple[int, ...]) -> str:
    return ",".join(str(a) for a in args)


def parse_key(key: str, degree: int) -> tuple[int, ...]:
    """Parse ``"u,v,t"`` into a tuple of the given length."""
    if degree == 0:
        if key.strip():
            raise InputError(f"degree-0 cochain keys must be empty, got {key!r}")
        return ()
    try:
        args = tuple(int(part) for part in key.split(","))
    except ValueError as exc:
        raise InputError(f"cochain key {key!r} is not a comma separated list of integers") from exc
    if len(args) != degree:
        raise InputError(f"cochain key {key!r} has {len(args)} arguments, expected {degree}")
    return args
