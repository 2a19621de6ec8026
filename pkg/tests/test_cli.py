import json
import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from leeyang import cli
from leeyang.models import ModelSpec
from leeyang.polyroots import ZeroSet, match_zeros
from leeyang.svg import emit_svg


def run(args, tmp_path):
    return cli.main(list(args) + ["--out", str(tmp_path)])


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_exact_ising(tmp_path, capsys):
    assert run(["exact", "--model", "ising", "--d", "2", "--L", "4", "--J", "1.0"], tmp_path) == 0
    zs = ZeroSet.from_csv((tmp_path / "zeros_exact.csv").read_text())
    assert len(zs) == 16 and zs.variable == "u"
    assert np.max(np.abs(np.abs(zs.values) - 1)) <= 1e-8
    assert "16 zeros in u" in capsys.readouterr().out
    assert ZeroSet.from_json((tmp_path / "zeros_exact.json").read_text()) == zs


def test_exact_blume_capel_and_potts(tmp_path):
    assert run(["exact", "--model", "blume-capel", "--L", "3", "--J", "0.69", "--lambda", "0.0"], tmp_path) == 0
    assert len(ZeroSet.from_csv((tmp_path / "zeros_exact.csv").read_text())) == 18
    assert run(["exact", "--model", "potts", "--q", "3", "--d", "2", "--L", "3"], tmp_path) == 0
    assert len(ZeroSet.from_csv((tmp_path / "zeros_exact.csv").read_text())) == 9


@pytest.mark.parametrize("args", [
    ["exact"],
    ["exact", "--model", "ising", "--J", "1.0"],
    ["exact", "--model", "ising", "--L", "3", "--J", "-1"],
    ["exact", "--model", "ising", "--L", "3", "--V", "10"],
    ["predict", "--model", "ising", "--V", "16", "--grid", "bad"],
    ["predict", "--model", "ising", "--V", "16", "--window", "2:1"],
    ["exact", "--model", "ising", "--L", "3", "--bogus"],
    ["exact", "--model", "potts", "--q", "1", "--L", "3"],
])
def test_flag_errors(args, tmp_path):
    try:
        code = run(args, tmp_path)
    except SystemExit as exc:
        code = exc.code
    assert code == 2
    assert not any(p.suffix in (".csv", ".json", ".svg") for p in tmp_path.iterdir())


def test_range_error(tmp_path, capsys):
    assert run(["exact", "--model", "ising", "--d", "3", "--L", "4", "--J", "1.0"], tmp_path) == 3
    assert "predict" in capsys.readouterr().err


def test_numerical_failure(tmp_path, monkeypatch, capsys):
    import leeyang.polyroots as pr

    monkeypatch.setattr(pr, "MAX_SWEEPS", 0)
    monkeypatch.setattr(pr, "_newton_polish", lambda c, z, steps=3: z)
    assert run(["exact", "--model", "ising", "--L", "3", "--J", "0.5"], tmp_path) == 4
    assert "numerical failure" in capsys.readouterr().err


def test_predict_ising(tmp_path):
    assert run(["predict", "--model", "ising", "--d", "2", "--V", "64", "--J", "1.0"], tmp_path) == 0
    summary = json.loads((tmp_path / "predict_summary.json").read_text())
    assert summary["n_zeros"] == 128  # in z; 64 in u
    assert summary["extrapolated"] is True
    for name in ("curves.csv", "zeros_predicted.csv", "multiple_points.json", "predict.svg"):
        assert (tmp_path / name).exists()


def test_untrusted_warning(tmp_path, capsys):
    run(["predict", "--model", "ising", "--V", "16", "--J", "0.5", "--format", "json"], tmp_path)
    assert "extrapolated" in capsys.readouterr().err


def test_compare(tmp_path):
    assert run(["compare", "--model", "ising", "--L", "4", "--J", "1.25"], tmp_path) == 0
    rep = json.loads((tmp_path / "compare_report.json").read_text())
    assert rep["max_distance"] < 5e-2
    assert rep["unmatched_a"] == [] and rep["unmatched_b"] == []
    assert (tmp_path / "compare.svg").exists()


def test_self_comparison():
    exact = cli.exact_zeros(ModelSpec("ising", 1.25, 2, 4))
    assert match_zeros(exact, exact).max_distance == 0


def test_density_ising(tmp_path):
    assert run(["density", "--model", "ising", "--V", "64", "--J", "1.0"], tmp_path) == 0
    data = json.loads((tmp_path / "density.json").read_text())
    (curve,) = data["curves"]
    assert curve["winding_count"] == 128
    assert abs(curve["integral"] - 128) <= 1e-6 * 128


@pytest.mark.parametrize("args", [
    ["predict", "--preset", "fig1c"],
    ["exact", "--model", "potts", "--q", "3", "--L", "3", "--J", "0.7"],
])
def test_deterministic_outputs(args, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(args, a) == 0 and run(args, b) == 0
    names = sorted(os.listdir(a))
    assert names == sorted(os.listdir(b)) and names
    for n in names:
        assert read(a / n) == read(b / n), n


def test_empty_svg_is_valid():
    doc = emit_svg()
    root = ET.fromstring(doc)
    assert root.tag.endswith("svg")
    assert doc == emit_svg()
    assert "stroke-dasharray" in doc


def test_svg_marks():
    doc = emit_svg(exact=[1j, -1j], predicted=[1j], multiple_points=[0.5])
    root = ET.fromstring(doc)
    tags = [el.tag.split("}")[1] for el in root]
    assert tags.count("circle") == 2  # unit circle + one predicted zero
    assert tags.count("path") == 3  # two crosses + one diamond
