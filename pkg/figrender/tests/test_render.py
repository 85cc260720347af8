"""Tests for the figure renderers, driven by the committed golden CSVs."""
import os

import pytest

from figrender import FIGURE_SCHEMAS, SchemaError, load_csv, render
from figrender.cli import main

GOLDEN = os.path.join(os.path.dirname(__file__), "..", "golden")


def golden_csv(figure):
    return os.path.join(GOLDEN, f"{figure}.csv")


class TestGoldenRendering:
    @pytest.mark.parametrize("figure", sorted(FIGURE_SCHEMAS))
    def test_renders_from_golden(self, figure, tmp_path):
        out = tmp_path / f"{figure}.png"
        render(figure, [golden_csv(figure)], out)
        assert out.exists() and out.stat().st_size > 1000

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        render("fig5", [golden_csv("fig5")], a)
        render("fig5", [golden_csv("fig5")], b)
        assert a.read_bytes() == b.read_bytes()


class TestSchemaValidation:
    def test_load_golden(self):
        data = load_csv(golden_csv("fig5"), "fig5")
        assert set(data) == {"k", "cos_ph"}
        assert data["cos_ph"][20:].max() <= -0.01

    def test_wrong_columns(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError) as exc:
            load_csv(p, "fig5")
        msg = str(exc.value)
        assert "missing ['k', 'cos_ph']" in msg
        assert "unexpected ['a', 'b']" in msg

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(SchemaError):
            load_csv(p, "fig1")

    def test_header_only(self, tmp_path):
        p = tmp_path / "hdr.csv"
        p.write_text("k,cos_ph\n")
        with pytest.raises(SchemaError, match="no data rows"):
            load_csv(p, "fig5")

    def test_unknown_figure(self, tmp_path):
        with pytest.raises(SchemaError):
            render("fig99", [golden_csv("fig1")], tmp_path / "x.png")

    def test_error_leaves_no_file(self, tmp_path):
        p = tmp_path / "hdr.csv"
        p.write_text("k,cos_ph\n")
        out = tmp_path / "out.png"
        with pytest.raises(SchemaError):
            render("fig5", [p], out)
        assert not out.exists()


class TestFigureContent:
    def test_fig5_includes_guide(self):
        import matplotlib.pyplot as plt
        from figrender.render import _fig5
        data = load_csv(golden_csv("fig5"), "fig5")
        fig, ax = plt.subplots()
        try:
            _fig5(data, ax)
            guides = [line for line in ax.get_lines()
                      if line.get_label() == "-0.01 guide"]
            assert len(guides) == 1
            assert guides[0].get_ydata()[0] == -0.01
        finally:
            plt.close(fig)

    def test_fig8_includes_both_slopes(self):
        import matplotlib.pyplot as plt
        from figrender.render import _fig8
        data = load_csv(golden_csv("fig8"), "fig8")
        fig, ax = plt.subplots()
        try:
            _fig8(data, ax)
            labels = [line.get_label() for line in ax.get_lines()]
            assert any(lab.startswith("fitted slope") for lab in labels)
            assert any(lab.startswith("reference slope 0.707")
                       for lab in labels)
        finally:
            plt.close(fig)


class TestCli:
    def test_success(self, tmp_path, capsys):
        out = tmp_path / "fig8.png"
        code = main(["--figure", "fig8", "--in", golden_csv("fig8"),
                     "--out", str(out)])
        assert code == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_schema_mismatch_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x,y\n1,2\n")
        code = main(["--figure", "fig5", "--in", str(bad),
                     "--out", str(tmp_path / "o.png")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exit(self, tmp_path):
        code = main(["--figure", "fig5", "--in", str(tmp_path / "nope.csv"),
                     "--out", str(tmp_path / "o.png")])
        assert code == 1

    def test_multiple_inputs(self, tmp_path):
        out = tmp_path / "fig4.png"
        code = main(["--figure", "fig4",
                     "--in", golden_csv("fig4"), golden_csv("fig4"),
                     "--out", str(out)])
        assert code == 0
        assert out.exists()
