import json

from heteroswitch.fixtures import load_fixture
from heteroswitch.report import analyze_network, render_figures, render_json, render_text


def test_rsp_report_headline_and_connections():
    report = analyze_network(load_fixture("rsp"))
    text = render_text(report)
    assert "No infinite switching" in report.headline
    assert text.count("no_switching") >= 6
    assert all(v.fired for v in report.connection_verdicts)
    assert all(db.k == 1 for db in report.depth_bounds)


def test_bowtie_report_depth_bound_language():
    report = analyze_network(load_fixture("bowtie"))
    text = render_text(report)
    assert "predetermined after" in text
    assert report.depth_bounds[0].k == 1


def test_house_report_includes_departure_notes():
    report = analyze_network(load_fixture("house"))
    assert report.departure_notes
    assert any("leave the network" in note for note in report.departure_notes)


def test_json_round_trips_through_schema():
    report = analyze_network(load_fixture("kirk_silber"))
    assert json.loads(render_json(report)) == report.to_dict()


def test_invalid_network_report_degrades_gracefully():
    from heteroswitch.network import load_network

    net = load_network({
        "ambient_dimension": 2,
        "nodes": [
            {"id": "a", "eigenvalues": [
                {"value": 1.0, "klass": "expanding", "label": "x2"},
                {"value": -1.0, "klass": "contracting", "label": "x1"}]},
            {"id": "b", "eigenvalues": [
                {"value": 1.0, "klass": "expanding", "label": "x1"},
                {"value": -1.0, "klass": "contracting", "label": "x2"}]},
        ],
        "connections": [
            {"from": "a", "to": "b", "expanding_label": "x2", "contracting_label": "x2"},
            {"from": "b", "to": "a", "expanding_label": "x1", "contracting_label": "x1"},
        ],
    })
    report = analyze_network(net)
    assert not report.valid
    assert "failed" in report.headline


def test_figures_render(tmp_path):
    report = analyze_network(load_fixture("r6_simplex"))
    paths = render_figures(report, load_fixture("r6_simplex"), tmp_path)
    assert paths and all(p.exists() for p in paths)
