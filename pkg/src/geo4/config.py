"""
Run profiles: the catalog to use, the composite manifold X that translates the
base region, and default limits.

A profile is chosen by the --profile option, else by the GEO4_PROFILE
environment variable, else the built-in "desk" profile is used. The value is
either the path of a profile file or the name of a built-in profile.
"""
import logging
import os
from dataclasses import dataclass
from typing import Literal, Mapping, Optional

import pydantic

from .catalog import BlockSpec, Catalog, Family, SlotKind, SurfaceSlot, parse_error, validate_block
from .geography import CompositeX, Realizer, build_composite_X, composite_from_block
from .invariants import CharNumbers, LatticePoint
from .swring import ClassKind, SWKind
from .utils import open_text

logger = logging.getLogger(__name__)

PROFILE_VARIABLE = "GEO4_PROFILE"
DEFAULT_PROFILE = "desk"


class ConfigError(ValueError):
    pass


class SyntheticComposite(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    chi: int = pydantic.Field(ge=1)
    c: int = pydantic.Field(ge=0)


class CompositeModel(pydantic.BaseModel):
    """Either a synthetic catalog block or the parameters of Y(x)♯⋯♯Y(x)♯Z(g)"""
    model_config = pydantic.ConfigDict(extra="forbid")

    synthetic: Optional[SyntheticComposite] = None
    x: Optional[int] = pydantic.Field(default=None, ge=1)
    g: Optional[int] = pydantic.Field(default=None, ge=2)
    k: Optional[int] = pydantic.Field(default=None, ge=1)

    @pydantic.model_validator(mode="after")
    def _one_kind(self) -> "CompositeModel":
        chained = (self.x, self.g, self.k)
        if self.synthetic is not None and any(v is not None for v in chained):
            raise ValueError("give either 'synthetic' or x, g and k, not both")
        if self.synthetic is None and any(v is None for v in chained):
            raise ValueError("x, g and k are all required unless 'synthetic' is given")
        return self


class Profile(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    name: str
    catalog: Optional[str] = None
    composite: Optional[CompositeModel] = None
    chi_max: int = pydantic.Field(default=200, ge=1)
    cores: int = pydantic.Field(default=1, ge=0)
    sw_proxy: Literal["provenance", "multiset"] = "provenance"


BUILTIN_PROFILES: Mapping[str, Profile] = {
    "desk": Profile(
        name="desk",
        composite=CompositeModel(synthetic=SyntheticComposite(chi=10, c=96)),
    ),
    "full": Profile(
        name="full",
        composite=CompositeModel(x=10, g=3, k=100),
    ),
}


def synthetic_composite_block(chi: int, c: int) -> BlockSpec:
    """
    A stand-in for a composite X: spin, simply connected, minimal of general
    type, with a torus in a cusp neighborhood and a second torus, both with
    dual spheres.
    """
    block = BlockSpec(
        family=Family.SYNTHETIC,
        params=(("c", c), ("chi", chi)),
        numbers=CharNumbers.from_point(LatticePoint(chi, c)),
        spin=True,
        simply_connected=True,
        surfaces=(
            SurfaceSlot("f", 1, SlotKind.TORUS_IN_CUSP, True, host="cusp neighborhood",
                class_label="f", class_kind=ClassKind.GLUING, pairing=0),
            SurfaceSlot("T", 1, SlotKind.SYMPLECTIC, True, host="fiber of a nucleus",
                class_label="T", class_kind=ClassKind.FIBER, pairing=0),
        ),
        sw_kind=SWKind.MINIMAL_GENERAL_TYPE,
        note="synthetic composite manifold",
    )
    validate_block(block, "composite")
    return block


def profile_from_json(text: str, source: str = "profile") -> Profile:
    try:
        return Profile.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise parse_error(e, source) from None


def load_profile(name_or_path: Optional[str] = None) -> Profile:
    """
    Resolve a profile. None means: use the environment variable, then the
    default.
    """
    if name_or_path is None:
        name_or_path = os.environ.get(PROFILE_VARIABLE) or DEFAULT_PROFILE
        logger.debug("Using profile %r", name_or_path)
    if os.path.isfile(name_or_path):
        with open_text(name_or_path) as f:
            return profile_from_json(f.read(), name_or_path)
    if name_or_path in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[name_or_path]
    raise ConfigError(
        f"profile '{name_or_path}' is neither a file nor a built-in profile ("
        + ", ".join(BUILTIN_PROFILES) + ")")


@dataclass
class Session:
    """Objects derived from a profile"""
    profile: Profile
    catalog: Catalog
    composite: Optional[CompositeX]

    @property
    def realizer(self) -> Realizer:
        return Realizer(self.catalog, self.composite)


def build_session(profile: Profile) -> Session:
    catalog = Catalog.default()
    if profile.catalog is not None:
        catalog = catalog.merged(Catalog.load(profile.catalog))
    composite = None
    spec = profile.composite
    if spec is not None and spec.synthetic is not None:
        block = synthetic_composite_block(spec.synthetic.chi, spec.synthetic.c)
        catalog.add(block)
        composite = composite_from_block(block)
    elif spec is not None:
        assert spec.x is not None and spec.g is not None and spec.k is not None
        composite = build_composite_X(spec.x, spec.g, spec.k, catalog)
    if composite is not None:
        logger.debug("Profile %s: composite X at %s, c/χ = %s", profile.name, composite.point, composite.ratio)
    return Session(profile, catalog, composite)
