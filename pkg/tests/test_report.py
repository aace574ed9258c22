"""报告渲染测试"""

import pytest

from pqtls.bench import CSV_COLUMNS, BenchError, BenchMode, BenchReport, PairResult, emit_report, render_plot
from pqtls.bench import plot as plot_module


def _report() -> BenchReport:
    rows = [
        PairResult(
            pair="ecdhe_x25519-rsa2048",
            kem="kem.mock.ecdhe_x25519",
            sig="sig.mock.rsa2048",
            mode=BenchMode.MODELED,
            completed=1000,
            cps=200.0,
            ratio_to_control=1.0,
            p50_ns=5_000_000,
            p95_ns=6_000_000,
            bytes_per_handshake=1130,
            is_control=True,
        ),
        PairResult(
            pair="kyber768-falcon512",
            kem="kem.mock.kyber768",
            sig="sig.mock.falcon512",
            mode=BenchMode.MODELED,
            completed=500,
            cps=100.123456,
            ratio_to_control=0.50061728,
            p50_ns=7_000_000,
            p95_ns=9_000_000,
            bytes_per_handshake=4700,
            degraded=True,
        ),
    ]
    return BenchReport(mode=BenchMode.MODELED, plan={}, seed=0, wall_clock_s=0.0, rows=rows)


def test_csv():
    lines = emit_report(_report(), "csv").decode().splitlines()
    assert lines[0] == "pair,kem,sig,mode,completed,cps,ratio_to_control,p50_ns,p95_ns,bytes_per_handshake"
    assert lines[0].split(",") == CSV_COLUMNS
    assert lines[1] == "ecdhe_x25519-rsa2048,kem.mock.ecdhe_x25519,sig.mock.rsa2048,modeled,1000,200.000,1.0000,5000000,6000000,1130"
    assert lines[2].startswith("kyber768-falcon512,kem.mock.kyber768,sig.mock.falcon512,modeled,500,100.123,0.5006,")


def test_empty_report_has_header_only():
    empty = BenchReport(mode=BenchMode.LIVE, plan={}, seed=0, wall_clock_s=0.0)
    assert emit_report(empty).decode() == ",".join(CSV_COLUMNS) + "\n"


def test_markdown_marks_degraded_rows():
    lines = emit_report(_report(), "markdown").decode().splitlines()
    assert lines[0].startswith("| pair | kem |")
    assert lines[1].startswith("|---|")
    assert "| ecdhe_x25519-rsa2048 |" in lines[2]
    assert lines[3].startswith("| kyber768-falcon512 (degraded) |")


def test_plotdata():
    assert emit_report(_report(), "plotdata").decode() == (
        "pair\tratio\necdhe_x25519-rsa2048\t1.0000\nkyber768-falcon512\t0.5006\n"
    )


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(_report(), "xml")


def test_report_to_dict():
    data = _report().to_dict()
    assert data["mode"] == "modeled"
    assert data["rows"][1]["mode"] == "modeled"
    assert data["rows"][1]["degraded"] is True


def test_render_plot(tmp_path):
    pytest.importorskip("matplotlib")
    output = render_plot(_report(), tmp_path / "ratios.png")
    assert output.exists()
    assert output.stat().st_size > 0


def test_render_plot_without_matplotlib(tmp_path, monkeypatch):
    import builtins

    real_import = builtins.__import__

    def fake_import(name, *args, **kwargs):
        if name.startswith("matplotlib"):
            raise ImportError(name)
        return real_import(name, *args, **kwargs)

    monkeypatch.setattr(builtins, "__import__", fake_import)
    with pytest.raises(BenchError):
        plot_module.render_plot(_report(), tmp_path / "ratios.png")
