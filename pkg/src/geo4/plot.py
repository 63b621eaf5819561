"""
SVG plots of the (χ, c) plane: the named lines and lattice points taken from
regions, certificates or coverage reports.

Output is deterministic: no date metadata, a fixed hash salt for element ids
and text kept as text.
"""
import json
import logging
from typing import List, Optional, Sequence, Tuple

import matplotlib
from matplotlib.figure import Figure
import pydantic

from .catalog import parse_error
from .geography import CompositeX, load_region
from .invariants import LatticePoint, LineName, RegionLine, f_line, line
from .utils import open_text

logger = logging.getLogger(__name__)

HEX_COLOR = r"^#[0-9a-fA-F]{6}$"

LINE_COLORS = {
    LineName.ELLIPTIC: "#444444",
    LineName.NOETHER: "#1f77b4",
    LineName.NP12: "#17becf",
    LineName.SIGZERO: "#d62728",
    LineName.RATIO876: "#9467bd",
    LineName.BMY: "#8c564b",
    LineName.PPX: "#bcbd22",
    LineName.FLINE: "#ff7f0e",
}


class PlotError(ValueError):
    pass


class PointSource(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    region: Optional[str] = None
    certificate: Optional[str] = None
    coverage: Optional[str] = None
    color: str = pydantic.Field(default="#2ca02c", pattern=HEX_COLOR)
    label: Optional[str] = None

    @pydantic.model_validator(mode="after")
    def _exactly_one(self) -> "PointSource":
        given = [v for v in (self.region, self.certificate, self.coverage) if v is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of 'region', 'certificate' or 'coverage'")
        return self

    @property
    def name(self) -> str:
        return self.label or self.region or self.certificate or self.coverage or "points"


class PlotSpec(pydantic.BaseModel):
    model_config = pydantic.ConfigDict(extra="forbid")

    chi_max: int = pydantic.Field(ge=1)
    show_lines: List[LineName] = list(LineName)
    point_sources: List[PointSource] = []
    output_path: Optional[str] = None


def plotspec_from_json(text: str, source: str = "plotspec") -> PlotSpec:
    try:
        return PlotSpec.model_validate_json(text)
    except pydantic.ValidationError as e:
        raise parse_error(e, source) from None


def load_plotspec(path: str) -> PlotSpec:
    with open_text(path) as f:
        return plotspec_from_json(f.read(), path)


def _points_from_document(path: str, expected_tag: str) -> List[LatticePoint]:
    with open_text(path) as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise PlotError(f"{path}: not a JSON document ({e})") from None
    tag = document.get("tag") if isinstance(document, dict) else None
    if tag != expected_tag:
        raise PlotError(f"{path}: expected a {expected_tag} document, found tag {tag!r}")
    if expected_tag == "geo4-certificate":
        return [LatticePoint(*document["point"])]
    return [
        LatticePoint(*outcome["point"])
        for outcome in document["outcomes"] if "expression" in outcome
    ]


def source_points(source: PointSource, chi_max: int) -> List[LatticePoint]:
    if source.region is not None:
        return list(load_region(source.region, chi_max).points())
    if source.certificate is not None:
        return _points_from_document(source.certificate, "geo4-certificate")
    assert source.coverage is not None
    return _points_from_document(source.coverage, "geo4-coverage")


def plotted_lines(spec: PlotSpec, composite: Optional[CompositeX]) -> List[RegionLine]:
    lines = []
    for name in spec.show_lines:
        if name is LineName.FLINE:
            if composite is None:
                logger.warning("No composite manifold configured; the f line is not drawn")
                continue
            lines.append(f_line(composite.point))
        else:
            lines.append(line(name))
    return lines


def render(
    spec: PlotSpec,
    composite: Optional[CompositeX] = None,
    true_aspect: bool = False,
    sources: Optional[Sequence[Tuple[PointSource, List[LatticePoint]]]] = None,
) -> Figure:
    """
    Draw the plot. c is divided by 8 on the vertical axis unless true_aspect
    is set.
    """
    scale = 1 if true_aspect else 8
    if sources is None:
        sources = [(source, source_points(source, spec.chi_max)) for source in spec.point_sources]
    figure = Figure(figsize=(8, 6))
    ax = figure.add_subplot()
    xs = [0, spec.chi_max]
    for region_line in plotted_lines(spec, composite):
        ys = [float(region_line(x)) / scale for x in xs]
        (drawn,) = ax.plot(
            xs, ys, color=LINE_COLORS[region_line.name], linewidth=1.2, label=region_line.label())
        drawn.set_gid(f"line-{region_line.name.value}")
    for index, (source, points) in enumerate(sources):
        if not points:
            continue
        collection = ax.scatter(
            [p.chi for p in points], [p.c / scale for p in points], s=10, facecolors="none",
            edgecolors=source.color, linewidths=0.8, label=source.name)
        collection.set_gid(f"points-{index}")
    ax.set_xlim(0, spec.chi_max)
    ax.set_ylim(0, 10 * spec.chi_max / scale)
    ax.set_xlabel("χ")
    ax.set_ylabel("c" if true_aspect else "c / 8")
    ax.grid(True, alpha=0.3)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper left", fontsize=8)
    return figure


def write_svg(figure: Figure, path) -> None:
    with matplotlib.rc_context({"svg.hashsalt": "geo4", "svg.fonttype": "none"}):
        with open_text(path, "w") as f:
            figure.savefig(f, format="svg", metadata={"Date": None})


def plot(spec: PlotSpec, path: str, composite: Optional[CompositeX] = None, true_aspect: bool = False) -> None:
    figure = render(spec, composite, true_aspect)
    write_svg(figure, path)
    logger.debug("Wrote %s", path)
