"""Regenerate the bundled network fixture documents.

Eigenvalues are dyadic rationals so that downstream Fraction arithmetic on
their ratios stays exact; magnitudes are chosen generic (no coincident
exponent ratios) with contraction dominating expansion along every cycle.
"""

import json
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "heteroswitch" / "data"

EPS = 0.8125  # 13/16
SIG = 1.421875  # 91/64
SE = EPS + SIG  # 143/64


def ev(value, klass, label):
    return {"value": value, "klass": klass, "label": label}


def conn(src, tgt, e, c, perm=None, rescale=None):
    entry = {"from": src, "to": tgt, "expanding_label": e, "contracting_label": c}
    if perm is not None:
        entry["permutation"] = [list(p) for p in perm]
    if rescale is not None:
        entry["rescale"] = rescale
    return entry


FIXTURES = {}

FIXTURES["kirk_silber"] = {
    "name": "kirk_silber",
    "ambient_dimension": 4,
    "nodes": [
        {"id": "xi1", "eigenvalues": [
            ev(-2.0, "radial", "x1"), ev(1.0, "expanding", "x2"),
            ev(-1.5, "contracting", "x3"), ev(-3.625, "contracting", "x4")]},
        {"id": "xi2", "eigenvalues": [
            ev(-2.0, "radial", "x2"), ev(-1.8125, "contracting", "x1"),
            ev(1.0, "expanding", "x3"), ev(1.625, "expanding", "x4")]},
        {"id": "xi3", "eigenvalues": [
            ev(-2.0, "radial", "x3"), ev(-1.625, "contracting", "x2"),
            ev(0.9375, "expanding", "x1"), ev(-0.6875, "transverse", "x4")]},
        {"id": "xi4", "eigenvalues": [
            ev(-2.0, "radial", "x4"), ev(-1.6875, "contracting", "x2"),
            ev(0.8125, "expanding", "x1"), ev(-0.59375, "transverse", "x3")]},
    ],
    "connections": [
        conn("xi1", "xi2", "x2", "x1"),
        conn("xi2", "xi3", "x3", "x2"),
        conn("xi2", "xi4", "x4", "x2"),
        conn("xi3", "xi1", "x1", "x3"),
        conn("xi4", "xi1", "x1", "x4"),
    ],
}

FIXTURES["bowtie"] = {
    "name": "bowtie",
    "ambient_dimension": 5,
    "nodes": [
        {"id": "xi1", "eigenvalues": [
            ev(-2.0, "radial", "x1"), ev(1.0, "expanding", "x2"),
            ev(-1.5, "contracting", "x3"),
            ev(-0.40625, "transverse", "x4"), ev(-0.53125, "transverse", "x5")]},
        {"id": "xi2", "eigenvalues": [
            ev(-2.0, "radial", "x2"), ev(-1.3125, "contracting", "x1"),
            ev(-2.90625, "contracting", "x5"),
            ev(1.0, "expanding", "x3"), ev(1.71875, "expanding", "x4")]},
        {"id": "xi3", "eigenvalues": [
            ev(-2.0, "radial", "x3"), ev(-1.40625, "contracting", "x2"),
            ev(0.9375, "expanding", "x1"),
            ev(-0.46875, "transverse", "x4"), ev(-0.5625, "transverse", "x5")]},
        {"id": "xi4", "eigenvalues": [
            ev(-2.0, "radial", "x4"), ev(-1.59375, "contracting", "x2"),
            ev(0.8125, "expanding", "x5"),
            ev(-0.34375, "transverse", "x1"), ev(-0.703125, "transverse", "x3")]},
        {"id": "xi5", "eigenvalues": [
            ev(-2.0, "radial", "x5"), ev(-1.53125, "contracting", "x4"),
            ev(0.84375, "expanding", "x2"),
            ev(-0.296875, "transverse", "x1"), ev(-0.796875, "transverse", "x3")]},
    ],
    "connections": [
        conn("xi1", "xi2", "x2", "x1"),
        conn("xi2", "xi3", "x3", "x2"),
        conn("xi3", "xi1", "x1", "x3"),
        conn("xi2", "xi4", "x4", "x2"),
        conn("xi4", "xi5", "x5", "x4"),
        conn("xi5", "xi2", "x2", "x5"),
    ],
}

FIXTURES["house"] = {
    "name": "house",
    "ambient_dimension": 5,
    "nodes": [
        {"id": "xi1", "eigenvalues": [
            ev(-2.0, "radial", "x1"), ev(1.0, "expanding", "x2"),
            ev(-1.40625, "contracting", "x3"), ev(-2.3125, "contracting", "x5"),
            ev(-0.5, "transverse", "x4")]},
        {"id": "xi2", "eigenvalues": [
            ev(-2.0, "radial", "x2"), ev(-1.5, "contracting", "x1"),
            ev(1.0, "expanding", "x3"), ev(1.59375, "expanding", "x4"),
            ev(-0.453125, "transverse", "x5")]},
        {"id": "xi3", "eigenvalues": [
            ev(-2.0, "radial", "x3"), ev(-1.3125, "contracting", "x2"),
            ev(0.90625, "expanding", "x1"),
            ev(-0.40625, "transverse", "x4"), ev(-0.546875, "transverse", "x5")]},
        {"id": "xi4", "eigenvalues": [
            ev(-2.0, "radial", "x4"), ev(-1.453125, "contracting", "x2"),
            ev(0.859375, "expanding", "x5"),
            ev(-0.359375, "transverse", "x1"), ev(-0.5078125, "transverse", "x3")]},
        {"id": "xi5", "eigenvalues": [
            ev(-2.0, "radial", "x5"), ev(-1.546875, "contracting", "x4"),
            ev(0.796875, "expanding", "x1"),
            ev(-0.390625, "transverse", "x2"), ev(-0.59375, "transverse", "x3")]},
    ],
    "connections": [
        conn("xi1", "xi2", "x2", "x1"),
        conn("xi2", "xi3", "x3", "x2"),
        conn("xi3", "xi1", "x1", "x3"),
        conn("xi2", "xi4", "x4", "x2"),
        conn("xi4", "xi5", "x5", "x4"),
        conn("xi5", "xi1", "x1", "x5"),
    ],
}

# Quotient of the two-person rock-scissors-paper game by its cyclic symmetry:
# xi1 = tied profiles, xi2 = first player ahead, xi3 = second player ahead.
# Axis roles at each node: x*/y* prefix = player, then B(eats)/b(eaten)/
# t(ie)/l(ose) for the strategy the direction points to.
FIXTURES["rsp"] = {
    "name": "rsp",
    "ambient_dimension": 4,
    "nodes": [
        {"id": "xi1", "eigenvalues": [
            ev(EPS, "expanding", "xB"), ev(-SIG, "contracting", "xb"),
            ev(EPS, "expanding", "yB"), ev(-SIG, "contracting", "yb")]},
        {"id": "xi2", "eigenvalues": [
            ev(-EPS, "contracting", "xt"), ev(-SE, "contracting", "xl"),
            ev(SIG, "expanding", "yt"), ev(SE, "expanding", "yB")]},
        {"id": "xi3", "eigenvalues": [
            ev(SE, "expanding", "xB"), ev(SIG, "expanding", "xt"),
            ev(-EPS, "contracting", "yt"), ev(-SE, "contracting", "yl")]},
    ],
    "connections": [
        conn("xi1", "xi2", "xB", "xt", [("xb", "xl"), ("yb", "yB"), ("yB", "yt")]),
        conn("xi1", "xi3", "yB", "yt", [("xb", "xB"), ("xB", "xt"), ("yb", "yl")]),
        conn("xi2", "xi1", "yt", "yb", [("xt", "xb"), ("xl", "xB"), ("yB", "yB")]),
        conn("xi2", "xi3", "yB", "yl", [("xt", "xB"), ("xl", "xt"), ("yt", "yt")]),
        conn("xi3", "xi1", "xt", "xb", [("xB", "xB"), ("yt", "yb"), ("yl", "yB")]),
        conn("xi3", "xi2", "xB", "xl", [("xt", "xt"), ("yt", "yB"), ("yl", "yt")]),
    ],
}

# One-population rock-scissors-paper-lizard-spock; x1..x5 = R,S,P,L,K.
# (winner, loser) -> (growth rate of winner direction at the loser's node,
# decay rate of the loser direction at the winner's node)
RSPLS_PAIRS = {
    ("x1", "x2"): (1.1875, 2.25),
    ("x1", "x4"): (0.6875, 4.5),
    ("x2", "x3"): (1.3125, 2.375),
    ("x2", "x4"): (1.375, 4.75),
    ("x3", "x1"): (1.25, 2.5),
    ("x3", "x5"): (0.71875, 5.0),
    ("x4", "x3"): (0.65625, 2.125),
    ("x4", "x5"): (1.4375, 4.25),
    ("x5", "x1"): (0.625, 2.625),
    ("x5", "x2"): (0.59375, 5.25),
}


def _rspls():
    labels = ["x1", "x2", "x3", "x4", "x5"]
    nodes = []
    for j in labels:
        eigs = [ev(-1.0, "radial", j)]
        for (w, l), (eps, sig) in RSPLS_PAIRS.items():
            if l == j:
                eigs.append(ev(eps, "expanding", w))
            if w == j:
                eigs.append(ev(-sig, "contracting", l))
        nodes.append({"id": j, "eigenvalues": eigs})
    conns = [conn(l, w, w, l) for (w, l) in RSPLS_PAIRS]
    return {
        "name": "rspls",
        "ambient_dimension": 5,
        "nodes": nodes,
        "connections": sorted(conns, key=lambda c: (c["from"], c["to"])),
    }


FIXTURES["rspls"] = _rspls()

FIXTURES["r6_simplex"] = {
    "name": "r6_simplex",
    "ambient_dimension": 6,
    "nodes": [
        {"id": "xi1", "eigenvalues": [
            ev(-1.0, "radial", "x1"), ev(1.0, "expanding", "x2"),
            ev(0.90625, "expanding", "x4"), ev(-1.40625, "contracting", "x3"),
            ev(-1.59375, "contracting", "x6"), ev(-0.5, "transverse", "x5")]},
        {"id": "xi2", "eigenvalues": [
            ev(-1.0, "radial", "x2"), ev(-1.5, "contracting", "x1"),
            ev(0.984375, "expanding", "x3"), ev(0.953125, "expanding", "x5"),
            ev(-0.453125, "transverse", "x4"), ev(-0.546875, "transverse", "x6")]},
        {"id": "xi3", "eigenvalues": [
            ev(-1.0, "radial", "x3"), ev(-1.3125, "contracting", "x2"),
            ev(0.84375, "expanding", "x1"), ev(-0.40625, "transverse", "x4"),
            ev(-0.59375, "transverse", "x5"), ev(-0.359375, "transverse", "x6")]},
        {"id": "xi4", "eigenvalues": [
            ev(-1.0, "radial", "x4"), ev(-1.453125, "contracting", "x1"),
            ev(-1.703125, "contracting", "x6"), ev(0.921875, "expanding", "x5"),
            ev(-0.5078125, "transverse", "x2"), ev(-0.421875, "transverse", "x3")]},
        {"id": "xi5", "eigenvalues": [
            ev(-1.0, "radial", "x5"), ev(-1.359375, "contracting", "x2"),
            ev(-1.546875, "contracting", "x4"), ev(0.9375, "expanding", "x6"),
            ev(-0.484375, "transverse", "x1"), ev(-0.4375, "transverse", "x3")]},
        {"id": "xi6", "eigenvalues": [
            ev(-1.0, "radial", "x6"), ev(-1.5625, "contracting", "x5"),
            ev(0.8125, "expanding", "x4"), ev(0.765625, "expanding", "x1"),
            ev(-0.515625, "transverse", "x2"), ev(-0.578125, "transverse", "x3")]},
    ],
    "connections": [
        conn("xi1", "xi2", "x2", "x1"),
        conn("xi1", "xi4", "x4", "x1"),
        conn("xi2", "xi3", "x3", "x2"),
        conn("xi2", "xi5", "x5", "x2"),
        conn("xi3", "xi1", "x1", "x3"),
        conn("xi4", "xi5", "x5", "x4"),
        conn("xi5", "xi6", "x6", "x5"),
        conn("xi6", "xi1", "x1", "x6"),
        conn("xi6", "xi4", "x4", "x6"),
    ],
}

FIXTURES["ac_network"] = {
    "name": "ac_network",
    "ambient_dimension": 5,
    "nodes": [
        {"id": "xi1", "eigenvalues": [
            ev(-2.0, "radial", "x1"), ev(-1.5, "contracting", "x3"),
            ev(1.0, "expanding", "x2"), ev(0.90625, "expanding", "x4"),
            ev(0.8125, "expanding", "x5")]},
        {"id": "xi2", "eigenvalues": [
            ev(-2.0, "radial", "x2"), ev(-1.40625, "contracting", "x1"),
            ev(0.953125, "expanding", "x3"),
            ev(-0.5, "transverse", "x4"), ev(-0.59375, "transverse", "x5")]},
        {"id": "xi3", "eigenvalues": [
            ev(-2.0, "radial", "x3"), ev(-1.3125, "contracting", "x2"),
            ev(-1.59375, "contracting", "x4"), ev(-1.8125, "contracting", "x5"),
            ev(0.84375, "expanding", "x1")]},
        {"id": "xi4", "eigenvalues": [
            ev(-2.0, "radial", "x4"), ev(-1.453125, "contracting", "x1"),
            ev(0.921875, "expanding", "x3"),
            ev(-0.453125, "transverse", "x2"), ev(-0.546875, "transverse", "x5")]},
        {"id": "xi5", "eigenvalues": [
            ev(-2.0, "radial", "x5"), ev(-1.546875, "contracting", "x1"),
            ev(0.875, "expanding", "x3"),
            ev(-0.421875, "transverse", "x2"), ev(-0.515625, "transverse", "x4")]},
    ],
    "connections": [
        conn("xi1", "xi2", "x2", "x1"),
        conn("xi2", "xi3", "x3", "x2"),
        conn("xi1", "xi4", "x4", "x1"),
        conn("xi4", "xi3", "x3", "x4"),
        conn("xi1", "xi5", "x5", "x1"),
        conn("xi5", "xi3", "x3", "x5"),
        conn("xi3", "xi1", "x1", "x3"),
    ],
}

CUSP_EXAMPLES = {
    "nested_pair": [
        {"i": 2, "j": 1, "a": 1.0, "alpha": 2.5, "orientation": "thin"},
        {"i": 2, "j": 1, "a": 1.0, "alpha": 1.5, "orientation": "thick"},
    ],
    "opposed_pair": [
        {"i": 1, "j": 2, "a": 1.0, "alpha": 2.0, "orientation": "thin"},
        {"i": 2, "j": 1, "a": 1.0, "alpha": 2.0, "orientation": "thin"},
    ],
    "intersecting_pair": [
        {"i": 2, "j": 1, "a": 1.0, "alpha": 2.0, "orientation": "thin"},
        {"i": 0, "j": 2, "a": 1.0, "alpha": 2.0, "orientation": "thin"},
    ],
    "cyclic_triple": [
        {"i": 1, "j": 0, "a": 1.0, "alpha": 2.0, "orientation": "thin"},
        {"i": 2, "j": 1, "a": 1.0, "alpha": 1.7, "orientation": "thin"},
        {"i": 0, "j": 2, "a": 1.0, "alpha": 1.3, "orientation": "thin"},
    ],
    "mixed_triple": [
        {"i": 1, "j": 0, "a": 1.0, "alpha": 2.0, "orientation": "thin"},
        {"i": 1, "j": 2, "a": 1.0, "alpha": 2.5, "orientation": "thick"},
        {"i": 0, "j": 2, "a": 1.0, "alpha": 1.8, "orientation": "thin"},
    ],
}


def main():
    sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
    from heteroswitch.network import load_network, validate_quasi_simple

    OUT.mkdir(parents=True, exist_ok=True)
    for name, doc in FIXTURES.items():
        net = load_network(doc)
        report = validate_quasi_simple(net)
        errs = report.errors()
        if errs:
            raise SystemExit(f"{name}: {[f'{f.subject}: {f.message}' for f in errs]}")
        N = net.cross_section_dimension
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")
        print(f"{name}: N={N}, nodes={len(net.nodes)}, connections={len(net.connections)}, "
              f"warnings={len(report.warnings())}")
    cusps_dir = OUT / "cusps"
    cusps_dir.mkdir(exist_ok=True)
    for name, regions in CUSP_EXAMPLES.items():
        (cusps_dir / f"{name}.json").write_text(json.dumps(regions, indent=2) + "\n")
        print(f"cusps/{name}: {len(regions)} regions")


if __name__ == "__main__":
    main()
