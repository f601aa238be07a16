"""
Job Configuration

Validated job descriptions for the command line. A job is read from a flat
key=value file with python-dotenv, overridden by command-line flags, and
checked against the tame model before anything is computed.
"""

from typing import Any, Dict, List, Literal, Mapping, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from sympy import isprime

from characters import AddCharTwist, GenuineCharData, MultChar
from exact_scalars import make_order
from lagrangian import LagrangianDecomposition, decomposition_by_name
from logger_config import setup_logger
from tame_field import LocalContext, make_context

logger = setup_logger(__name__)

CONFIG_KEYS = ("p", "f", "n", "modulus", "depth", "unit_exp", "varpi_num", "varpi_den", "psi_val", "psi_unit",
               "decomposition", "k", "m")


class ConfigError(ValueError):
    """Raised when a job configuration is rejected."""


class ContextConfig(BaseModel):
    """The p-adic field and the cover"""
    p: int = Field(..., description="Odd residue characteristic")
    f: int = Field(1, ge=1, description="Residue degree, q = p^f")
    n: int = Field(1, ge=1, description="Cover degree; divides q - 1 and is not divisible by 4")
    modulus_coeffs: Optional[List[int]] = Field(None, description="Monic irreducible for F_q, lowest degree first")
    depth: int = Field(1, ge=1, description="p-power depth of the roots of unity carried by the scalars")

    @field_validator("p")
    @classmethod
    def odd_prime(cls, value: int) -> int:
        if value == 2 or not isprime(value):
            raise ValueError(f"p must be an odd prime, got {value}")
        return value

    @field_validator("modulus_coeffs", mode="before")
    @classmethod
    def split_modulus(cls, value: Any) -> Any:
        if isinstance(value, str):
            text = value.strip()
            return [int(part) for part in text.split(",")] if text else None
        return value

    @model_validator(mode="after")
    def tame_cover(self) -> "ContextConfig":
        q = self.p ** self.f
        if (q - 1) % self.n:
            raise ValueError(f"n={self.n} must divide q - 1 = {q - 1}")
        if self.n % 4 == 0:
            raise ValueError(f"n={self.n} is divisible by 4")
        return self


class CharacterConfig(BaseModel):
    """chi(u) = zeta_(q-1)^unit_exp on the generator, chi(varpi) = exp(2 pi i varpi_num / varpi_den)"""
    unit_exp: int = Field(0, description="Exponent of chi on the residue-field generator")
    varpi_num: int = Field(0, description="Numerator of the angle of chi(varpi)")
    varpi_den: int = Field(1, ge=1, description="Denominator of the angle of chi(varpi)")


class PsiConfig(BaseModel):
    """psi_a with a = varpi^val * u^unit_exp"""
    val: int = Field(0, description="Valuation of a")
    unit_exp: int = Field(0, description="Discrete log of the unit part of a")


class JobConfig(BaseModel):
    """A complete job"""
    context: ContextConfig
    character: CharacterConfig = Field(default_factory=CharacterConfig)
    psi: PsiConfig = Field(default_factory=PsiConfig)
    decomposition: Literal["standard", "swapped"] = Field("standard", description="Lagrangian decomposition")
    k: int = Field(0, ge=0, description="Index into K-bar for partial factors")
    m: Optional[int] = Field(None, ge=1, description="Cover degree of the related representations")

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "context": {"p": 7, "f": 1, "n": 3},
                "character": {"unit_exp": 0, "varpi_num": 0, "varpi_den": 1},
                "psi": {"val": 0, "unit_exp": 0},
                "decomposition": "standard",
                "k": 0,
            }
        }
    )

    @model_validator(mode="after")
    def character_fits(self) -> "JobConfig":
        ctx = self.context
        order = make_order(ctx.p, ctx.f, ctx.n, ctx.depth)
        if (order * self.character.varpi_num) % self.character.varpi_den:
            raise ValueError(f"varpi_den={self.character.varpi_den} must divide N * varpi_num "
                             f"(N={order}, varpi_num={self.character.varpi_num})")
        d = ctx.n if ctx.n % 2 else ctx.n // 2
        if self.k >= d:
            raise ValueError(f"k={self.k} must index K-bar, which has d={d} classes")
        return self

    # -- builders --------------------------------------------------------------------------------

    def build_context(self) -> LocalContext:
        ctx = self.context
        return make_context(ctx.p, ctx.f, ctx.n, ctx.modulus_coeffs, ctx.depth)

    def build_character(self, ctx: LocalContext) -> MultChar:
        character = self.character
        return MultChar.from_descriptor(ctx, character.unit_exp, character.varpi_num, character.varpi_den)

    def build_psi(self, ctx: LocalContext) -> AddCharTwist:
        return AddCharTwist(ctx.tame.make_class(self.psi.val, self.psi.unit_exp))

    def build_data(self, ctx: LocalContext) -> GenuineCharData:
        return GenuineCharData(ctx, self.build_character(ctx), self.build_psi(ctx))

    def build_decomposition(self, ctx: LocalContext) -> LagrangianDecomposition:
        return decomposition_by_name(ctx, self.decomposition)


def _nest(flat: Mapping[str, Any]) -> Dict[str, Any]:
    """Flat keys to the nested JobConfig layout."""
    context = {key: flat[key] for key in ("p", "f", "n", "depth") if flat.get(key) is not None}
    if flat.get("modulus") is not None:
        context["modulus_coeffs"] = flat["modulus"]
    character = {key: flat[key] for key in ("unit_exp", "varpi_num", "varpi_den") if flat.get(key) is not None}
    psi = {}
    if flat.get("psi_val") is not None:
        psi["val"] = flat["psi_val"]
    if flat.get("psi_unit") is not None:
        psi["unit_exp"] = flat["psi_unit"]
    nested: Dict[str, Any] = {"context": context, "character": character, "psi": psi}
    for key in ("decomposition", "k", "m"):
        if flat.get(key) is not None:
            nested[key] = flat[key]
    return nested


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(piece) for piece in item["loc"]) or "job"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> JobConfig:
    """
    Read a key=value job file, apply flag overrides and validate.

    Args:
        path: Optional config file; keys are those in CONFIG_KEYS
        overrides: Values from the command line; None entries are ignored

    Returns:
        JobConfig: The validated job

    Raises:
        ConfigError: For unknown keys, a missing file, or values outside the tame model
    """
    flat: Dict[str, Any] = {}
    if path is not None:
        values = dotenv_values(path)
        if not values:
            raise ConfigError(f"config file {path} is missing or empty")
        unknown = sorted(set(values) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"unknown config keys in {path}: {', '.join(unknown)}")
        flat.update(values)
    for key, value in (overrides or {}).items():
        if value is not None:
            flat[key] = value
    if flat.get("p") is None:
        raise ConfigError("p is required (config file or --p)")
    try:
        config = JobConfig.model_validate(_nest(flat))
    except ValidationError as error:
        message = _describe(error)
        logger.error(f"Rejected job configuration: {message}")
        raise ConfigError(message) from None
    logger.debug(f"Loaded job configuration: {config.model_dump()}")
    return config
