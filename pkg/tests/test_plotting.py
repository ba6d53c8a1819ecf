import numpy as np

from funbialign.curves import CurveSet
from funbialign.plotting import curves_svg, motif_svg, plot


def curves():
    x = np.linspace(0, 6, 200)
    return CurveSet.from_arrays([np.sin(x), np.cos(x)], ids=["s", "c"])


def motif(n=8):
    return {
        "final_rank": 1,
        "h_adjusted": 0.01,
        "portions": [{"curve_id": "s" if k % 2 else "c", "start": 10 * k, "length": 20} for k in range(n)],
    }


def test_no_motifs_writes_only_curves(tmp_path):
    paths = plot([], curves(), tmp_path)
    assert [p.name for p in paths] == ["curves.svg"]
    assert sorted(p.name for p in tmp_path.iterdir()) == ["curves.svg"]


def test_one_polyline_per_portion(tmp_path):
    paths = plot([motif()], curves(), tmp_path)
    assert [p.name for p in paths] == ["curves.svg", "motif_001.svg"]
    assert paths[1].read_text().count("<polyline") == 8
    # 2 grey curves + 8 highlighted spans
    assert paths[0].read_text().count("<path") == 10


def test_output_is_deterministic():
    a = motif_svg(motif(), curves()) + curves_svg(curves(), [motif()])
    b = motif_svg(motif(), curves()) + curves_svg(curves(), [motif()])
    assert a == b
    assert a.startswith("<svg")


def test_flat_curve_renders():
    flat = CurveSet.from_arrays([np.zeros(10)])
    assert "nan" not in curves_svg(flat)
