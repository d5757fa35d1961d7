import json
import subprocess
import sys

from heteroswitch.cli import main
from heteroswitch.fixtures import fixture_path
from heteroswitch.report import analyze_network, render_json
from heteroswitch.fixtures import load_fixture


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_text_contains_verdicts(capsys):
    code, out, _ = run_cli(["analyze", "rsp", "--no-figures"], capsys)
    assert code == 0
    assert "no_switching" in out
    assert "k = 1" in out


def test_analyze_json_round_trips(capsys):
    code, out, _ = run_cli(["analyze", "kirk_silber", "--format", "json",
                            "--no-figures"], capsys)
    assert code == 0
    payload = json.loads(out)
    report = analyze_network(load_fixture("kirk_silber"))
    assert payload == json.loads(render_json(report))


def test_analyze_accepts_file_path(tmp_path, capsys):
    code, out, _ = run_cli(["analyze", str(fixture_path("bowtie")),
                            "--no-figures"], capsys)
    assert code == 0 and "bowtie" in out


def test_analyze_unknown_fixture_errors(capsys):
    code, _, err = run_cli(["analyze", "nonexistent", "--no-figures"], capsys)
    assert code == 1
    assert "unknown fixture" in err


def test_paths_depth3_r6(capsys):
    code, out, _ = run_cli(["paths", "r6_simplex", "--start", "xi1",
                            "--depth", "3", "--exact"], capsys)
    assert code == 0
    assert out.count("FOLLOWABLE") == 3
    assert "3 followable of 3 paths" in out


def test_paths_debug_dumps_systems(capsys):
    code, out, _ = run_cli(["paths", "bowtie", "--start", "xi1", "--depth", "2",
                            "--debug"], capsys)
    assert code == 0
    assert "eta'" in out and "constraint:" in out


def test_cusps_cyclic_triple(tmp_path, capsys):
    cusp_file = fixture_path("rsp").parent / "cusps" / "cyclic_triple.json"
    code, out, _ = run_cli(["cusps", str(cusp_file), "--no-figures"], capsys)
    assert code == 0
    assert "empty near the origin" in out
    assert "certificate" in out
    assert "agrees" in out


def test_cusps_json_payload(capsys):
    cusp_file = fixture_path("rsp").parent / "cusps" / "intersecting_pair.json"
    code, out, _ = run_cli(["cusps", str(cusp_file), "--format", "json",
                            "--no-figures"], capsys)
    payload = json.loads(out)
    assert payload["intersects_near_origin"] is True
    assert payload["agreement"] is True
    assert payload["witness_ray"] is not None


def test_simulate_writes_csv_and_figures(tmp_path, capsys):
    out_csv = tmp_path / "itins.csv"
    code, out, _ = run_cli([
        "simulate", "kirk_silber", "--samples", "8", "--seed", "4",
        "--out", str(out_csv), "--figures", str(tmp_path),
    ], capsys)
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "member,event_index,event_type,node_or_edge,time"
    assert any("entered_node" in line for line in lines)
    assert any("traversed_connection" in line for line in lines)
    assert (tmp_path / "kirk_silber_timeseries.png").exists()
    assert (tmp_path / "kirk_silber_sections.png").exists()
    assert "violations of cone verdicts: 0" in out


def test_fixture_env_override(tmp_path, capsys, monkeypatch):
    src = fixture_path("rsp").read_text()
    (tmp_path / "custom.json").write_text(src)
    monkeypatch.setenv("HETEROSWITCH_FIXTURES", str(tmp_path))
    code, out, _ = run_cli(["analyze", "custom", "--no-figures"], capsys)
    assert code == 0 and "rsp" in out


def test_usage_error_exits_2():
    proc = subprocess.run(
        [sys.executable, "-m", "heteroswitch.cli", "paths", "rsp"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2


def test_verify_subset(capsys):
    code, out, _ = run_cli(["verify", "--criteria", "2,4"], capsys)
    assert code == 0
    assert "[PASS]  2." in out and "[PASS]  4." in out
    assert "2/2 criteria passed" in out


def test_simulate_emits_plot_data_csv(tmp_path, capsys):
    out_csv = tmp_path / "itins.csv"
    code, out, _ = run_cli([
        "simulate", "bowtie", "--samples", "5", "--seed", "9",
        "--out", str(out_csv), "--no-figures",
    ], capsys)
    assert code == 0
    ts = tmp_path / "bowtie_timeseries.csv"
    sc = tmp_path / "bowtie_sections.csv"
    assert ts.exists() and sc.exists()
    assert ts.read_text().splitlines()[0].startswith("t,x1,")
    assert sc.read_text().splitlines()[0] == "member,node,entry_time"


def test_resolve_fixtures_style_path(capsys):
    code, out, _ = run_cli(["paths", "fixtures/r6_simplex", "--start", "xi1",
                            "--depth", "3", "--exact"], capsys)
    assert code == 0 and out.count("FOLLOWABLE") == 3
