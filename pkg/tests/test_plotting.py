import numpy as np

from manifoldkit.embedding import Embedding2D
from manifoldkit.plotting import PALETTE, PlotSpec, palette_for, render_scatter_svg


def embedding(coords):
    return Embedding2D(coords=np.asarray(coords, dtype=float), algorithm="test")


def test_circle_and_legend_counts():
    svg = render_scatter_svg(embedding([[0, 0], [1, 0], [0, 1]]), ["a", "b", "a"])
    assert svg.count("<circle") == 3
    assert svg.count("<text") == 2


def test_byte_deterministic():
    coords = np.random.default_rng(3).normal(size=(20, 2))
    labels = ["x" if i % 2 else "y" for i in range(20)]
    assert render_scatter_svg(embedding(coords), labels) == \
        render_scatter_svg(embedding(coords), labels)


def test_degenerate_coordinates_centered():
    spec = PlotSpec(width=400, height=300)
    svg = render_scatter_svg(embedding([[1.0, 1.0]] * 3), ["a", "a", "a"], spec)
    assert svg.count('cx="200.000" cy="150.000"') == 3
    assert svg.startswith("<?xml")
    assert svg.rstrip().endswith("</svg>")


def test_palette_stable_under_input_order():
    assert palette_for(["b", "a", "c"]) == palette_for(["c", "b", "a"])
    colors = palette_for([f"l{i}" for i in range(15)])
    assert set(colors.values()) <= set(PALETTE)


def test_margin_respected():
    svg = render_scatter_svg(embedding([[0, 0], [1, 1]]), ["a", "a"],
                             PlotSpec(width=100, height=100, legend=False))
    assert 'cx="5.000"' in svg and 'cx="95.000"' in svg


def test_labels_escaped():
    svg = render_scatter_svg(embedding([[0, 0], [1, 1]]), ["a<b", "a<b"])
    assert "a&lt;b" in svg
