"""Request/response models of the HTTP surface.

Every response document carries ``"schema": 1`` and serializes with a stable
key order (model field order).  Origamis travel as their text encoding,
permutations as cycle notation, rationals as ``p/q`` strings.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1


class _Response(BaseModel):
    model_config = ConfigDict(populate_by_name=True)
    schema_version: int = Field(default=SCHEMA_VERSION, serialization_alias="schema")


class OrigamiRequest(BaseModel):
    origami: str


class InfoResponse(_Response):
    degree: int
    abelian: bool
    genus: int
    orders: list[int]
    valency4: list[int]
    poles: int
    mu: str
    nu: str
    xye: str


class DoubleCoverRequest(BaseModel):
    origami: str


class DoubleCoverResponse(_Response):
    degree: int
    connected: bool
    components: int
    X: str
    Y: str
    component_pairs: list[list[str]]  # (x, y) cycle text per component, abelian case


class IsomorphicRequest(BaseModel):
    origami_a: str
    origami_b: str


class IsomorphicResponse(_Response):
    isomorphic: bool
    witness: Optional[str] = None


class VeechRequest(BaseModel):
    origami: str
    mode: str = "psl"


class VeechResponse(_Response):
    mode: str
    index: int
    coset_reps: list[str]
    stabilizer_gens: list[str]
    stabilizer_matrices: Optional[list[list[list[int]]]] = None
    orbit: list[str]


class ContainsRequest(BaseModel):
    origami: str
    matrix: list[list[int]]
    mode: str = "psl"


class ContainsResponse(_Response):
    contains: bool
    word: str


class ModuliRequest(BaseModel):
    origami: str


class ModuliResponse(_Response):
    degree: int
    rows: list[list[int]]
    kernel_dimension: int
    kernel_basis: list[list[int]]
    centralizer_gens: list[str]
    centralizer_order: int


class CheckModuliRequest(BaseModel):
    origami: str
    moduli: str


class CheckModuliResponse(_Response):
    compatible: bool


class GeometryRequest(BaseModel):
    origami: str
    moduli: str
    dirs: str = "0,pi/2"


class GeometryResponse(_Response):
    widths: list[str]
    heights: list[str]
    area: str
    horizontal_cylinders: list[list[int]]
    vertical_cylinders: list[list[int]]
    dirs: list[str]


class CylindersRequest(BaseModel):
    origami: str
    moduli: str
    direction: str = "horizontal"


class CylindersResponse(_Response):
    direction: str
    moduli: list[str]


class CoverVeechRequest(BaseModel):
    tuple: str
    base: str = "D"


class CoverVeechResponse(_Response):
    index: int
    coset_reps: list[str]
    stabilizer_gens: list[str]


class RenderRequest(BaseModel):
    origami: str


class RenderResponse(_Response):
    svg: str


class ErrorBody(BaseModel):
    type: str
    message: str
    position: Optional[int] = None


class ErrorResponse(BaseModel):
    error: ErrorBody
