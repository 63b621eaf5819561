import json

import pytest

from geo4.catalog import ParseError
from geo4.geography import realize_base
from geo4.invariants import LatticePoint, LineName
from geo4.json import dumps
from geo4.plot import (
    PlotError, PlotSpec, load_plotspec, plot, plotspec_from_json, plotted_lines, render, source_points,
)

from utils import datapath


def test_load_plotspec():
    spec = load_plotspec(datapath("plotspec.json"))
    assert spec.chi_max == 40
    assert spec.show_lines == list(LineName)
    assert spec.point_sources[0].name == "base wedge"


@pytest.mark.parametrize("document", [
    {"chi_max": 0},
    {"chi_max": 10, "show_lines": ["Wobble"]},
    {"chi_max": 10, "point_sources": [{"region": "base", "color": "green"}]},
    {"chi_max": 10, "point_sources": [{}]},
    {"chi_max": 10, "point_sources": [{"region": "base", "coverage": "c.json"}]},
])
def test_invalid_plotspecs(document):
    with pytest.raises(ParseError):
        plotspec_from_json(json.dumps(document))


def test_plotted_lines(desk_session):
    spec = PlotSpec(chi_max=10)
    assert len(plotted_lines(spec, desk_session.composite)) == len(LineName)
    assert len(plotted_lines(spec, None)) == len(LineName) - 1


def test_render(desk_session):
    spec = load_plotspec(datapath("plotspec.json"))
    figure = render(spec, desk_session.composite)
    (ax,) = figure.axes
    assert len(ax.get_lines()) >= 6
    assert ax.get_ylim() == (0, 50)
    figure = render(spec, desk_session.composite, true_aspect=True)
    assert figure.axes[0].get_ylim() == (0, 400)


def test_svg_is_deterministic(tmp_path, desk_session):
    spec = load_plotspec(datapath("plotspec.json"))
    first = tmp_path / "first.svg"
    second = tmp_path / "second.svg"
    plot(spec, str(first), desk_session.composite)
    plot(spec, str(second), desk_session.composite)
    assert first.read_bytes() == second.read_bytes()
    text = first.read_text(encoding="utf-8")
    assert 'id="line-Noether"' in text
    assert 'id="line-FLine"' in text
    assert 'id="points-0"' in text
    assert "<dc:date>" not in text


def test_points_from_certificate(tmp_path):
    path = tmp_path / "certificate.json"
    path.write_text(dumps(realize_base(LatticePoint(17, 8)).as_json()), encoding="utf-8")
    spec = plotspec_from_json(json.dumps({"chi_max": 20, "point_sources": [{"certificate": str(path)}]}))
    assert source_points(spec.point_sources[0], 20) == [LatticePoint(17, 8)]


def test_points_wrong_document(tmp_path):
    path = tmp_path / "certificate.json"
    path.write_text(json.dumps({"tag": "geo4-lines"}))
    spec = plotspec_from_json(json.dumps({"chi_max": 20, "point_sources": [{"coverage": str(path)}]}))
    with pytest.raises(PlotError):
        source_points(spec.point_sources[0], 20)
    path.write_text("not json")
    with pytest.raises(PlotError):
        source_points(spec.point_sources[0], 20)
