"""
Group File Schema

The exchange format of the command line: a permutation group given by its
name, its degree and a list of generators, each generator written as the
0-based list of images of ``0 .. degree-1``. ``metadata`` records how the
group was constructed and is carried along unchanged.

Example document:

    {
      "name": "C7:C3",
      "degree": 10,
      "generators": [[1, 2, 3, 4, 5, 6, 0, 7, 8, 9], [0, 2, 4, 6, 1, 3, 5, 8, 9, 7]],
      "metadata": {"family": "metacyclic", "params": {"m": 7, "n": 3, "r": 2}}
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.config import settings
from app.core.errors import BadSpec
from app.models.group import Group, Perm


class GroupFile(BaseModel):
    """A permutation group as stored on disk."""

    name: str = Field(..., min_length=1, description="Label used in reports", examples=["C7:C3"])
    degree: int = Field(..., ge=1, description="Number of points acted on", examples=[10])
    generators: List[List[int]] = Field(
        default_factory=list,
        description="Generators as 0-based image arrays of length degree",
        examples=[[[1, 2, 0]]],
    )
    metadata: Dict[str, Any] = Field(default_factory=dict, description="Construction provenance")

    @field_validator("degree")
    @classmethod
    def validate_degree(cls, v: int) -> int:
        if v > settings.DEGREE_CAP:
            raise ValueError(f"Degree {v} exceeds the cap {settings.DEGREE_CAP}")
        return v

    @model_validator(mode="after")
    def validate_generators(self) -> "GroupFile":
        points = list(range(self.degree))
        for i, images in enumerate(self.generators):
            if len(images) != self.degree:
                raise ValueError(f"Generator {i} has {len(images)} images, expected {self.degree}")
            if sorted(images) != points:
                raise ValueError(f"Generator {i} is not a permutation of 0..{self.degree - 1}")
        return self

    model_config = ConfigDict(
        json_schema_extra={
            "examples": [
                {"name": "C3", "degree": 3, "generators": [[1, 2, 0]], "metadata": {"family": "cyclic"}},
            ]
        }
    )

    # ------------------------------------------------------------------
    # Conversion
    # ------------------------------------------------------------------
    def to_group(self, cap: Optional[int] = None) -> Group:
        """Build the group and enumerate its elements, honouring ``cap``."""
        gens = [Perm(tuple(images)) for images in self.generators]
        return Group.from_generators(self.degree, gens, cap=cap, name=self.name)

    @classmethod
    def from_group(cls, g: Group, metadata: Optional[Dict[str, Any]] = None) -> "GroupFile":
        return cls(
            name=g.name,
            degree=g.degree,
            generators=[list(p.images) for p in g.generators],
            metadata=metadata or {},
        )

    # ------------------------------------------------------------------
    # Files
    # ------------------------------------------------------------------
    @classmethod
    def load(cls, path: Union[str, Path]) -> "GroupFile":
        """
        Read a group file.

        Raises:
        - BadSpec: the file is not JSON or does not describe a permutation group.
        """
        text = Path(path).read_text()
        try:
            return cls.model_validate(json.loads(text))
        except json.JSONDecodeError as exc:
            raise BadSpec(f"{path}: not a JSON document ({exc.msg})") from None
        except ValidationError as exc:
            message = "; ".join(err["msg"] for err in exc.errors())
            raise BadSpec(f"{path}: {message}") from None

    def dumps(self) -> str:
        return self.model_dump_json(indent=2)

    def dump(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps() + "\n")
