import hashlib
from pathlib import Path

import pytest
import yaml

from oracles import canonical_by_definition, covered, strings, weight
from stagewise.cli import main
from stagewise.errors import ConfigError
from stagewise.scenario import demo_names, demo_path, load_scenario, parse_scenario

GOLDEN = Path(__file__).parent / "golden" / "lemma33_basic"


def write(tmp_path, doc, name="s.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(doc))
    return p


def demo_doc(name):
    return yaml.safe_load(demo_path(name).read_text())


def test_demo_list(capsys):
    assert main(["demo", "--list"]) == 0
    names = capsys.readouterr().out.split()
    assert "lemma33_basic" in names and names == demo_names()


def test_lemma33_golden(tmp_path, capsys):
    assert main(["demo", "--name", "lemma33_basic", "--out", str(tmp_path)]) == 0
    for f in GOLDEN.glob("*.csv"):
        assert (tmp_path / f.name).read_text() == f.read_text(), f.name
    digest = hashlib.sha256((tmp_path / "P.machine.csv").read_bytes()).hexdigest()
    assert digest == (GOLDEN / "P.machine.csv.sha256").read_text().strip()


def test_lemma33_trace_matches_oracle():
    doc = demo_doc("lemma33_basic")
    axioms = [(a["string"], set(a.get("in", [])), set(a.get("out", [])), a.get("appearance", 1))
              for a in doc["operators"]["W"]]
    v = canonical_by_definition(axioms, [tuple(e) for e in doc["halting"]["events"]], 4)
    lines = (GOLDEN / "P.ENDS_IN_ZEROS.trace.csv").read_text().splitlines()[1:]
    for s in range(1, 5):
        hits = [x for x in strings((1 << s) - 1) if covered(x, v[s - 1])]
        num, _, k = lines[s].split(",")[3].partition("/2^")
        assert weight(hits) * 2 ** int(k) == int(num)


def test_rerun_is_byte_identical(tmp_path):
    for name in demo_names():
        a, b = tmp_path / name / "a", tmp_path / name / "b"
        assert main(["demo", "--name", name, "--out", str(a)]) == 0
        assert main(["demo", "--name", name, "--out", str(b)]) == 0
        fa, fb = sorted(a.iterdir()), sorted(b.iterdir())
        assert [p.name for p in fa] == [p.name for p in fb]
        assert all(x.read_bytes() == y.read_bytes() for x, y in zip(fa, fb))


@pytest.mark.parametrize("name", demo_names())
def test_demos_verify(name, capsys):
    assert main(["demo", "--name", name, "--verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.strip().endswith("0 violation(s)")


@pytest.mark.parametrize("kind, key, stage", [("flip", "010", 2), ("drop", "0110101", 3)])
def test_fault_injection_fails_verify(tmp_path, capsys, kind, key, stage):
    doc = demo_doc("lemma33_basic")
    doc["fault"] = {"target": "P", "kind": kind, "input": key}
    assert main(["verify", str(write(tmp_path, doc))]) == 1
    out = capsys.readouterr().out
    assert f"FAIL padding-rule P stage {stage}: " in out


def test_fault_in_cone_of_cor34(tmp_path, capsys):
    doc = demo_doc("kraft_padding")
    doc["fault"] = {"target": "K", "kind": "drop", "input": "000"}
    assert main(["verify", str(write(tmp_path, doc))]) == 1
    assert "FAIL cone K stage 2" in capsys.readouterr().out


def test_fault_in_orchestration(tmp_path, capsys):
    doc = demo_doc("leftce_universal")
    doc["fault"] = {"target": "L", "kind": "drop", "input": "01001"}
    assert main(["verify", str(write(tmp_path, doc))]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_construct_and_trace_split(tmp_path):
    p = demo_path("kraft_totality")
    assert main(["construct", str(p), "--out", str(tmp_path / "c")]) == 0
    assert main(["trace", str(p), "--out", str(tmp_path / "t")]) == 0
    assert sorted(x.name for x in (tmp_path / "c").iterdir()) == ["C.machine.csv"]
    assert sorted(x.name for x in (tmp_path / "t").iterdir()) == ["C.TOTAL.trace.csv"]


def test_horizon_zero_is_config_error(tmp_path, capsys):
    p = write(tmp_path, {"name": "x", "horizon": 0})
    assert main(["verify", str(p)]) == 2
    assert "horizon" in capsys.readouterr().err
    assert main(["verify", str(demo_path("lemma33_basic")), "--horizon", "0"]) == 2


def test_horizon_override(tmp_path):
    p = demo_path("kraft_totality")
    assert main(["trace", str(p), "--horizon", "3", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "C.TOTAL.trace.csv").read_text().splitlines()
    assert len(rows) == 1 + 4


def test_empty_scenario_passes_with_warning(tmp_path, capsys):
    assert main(["verify", str(write(tmp_path, {"name": "empty", "horizon": 2}))]) == 0
    assert "warning" in capsys.readouterr().err


@pytest.mark.parametrize("doc, key", [
    ({"horizon": 3, "constructions": [{"id": "K", "kind": "cor34", "rho": "02",
                                       "targets": ["0"]}]}, "constructions[0].rho"),
    ({"horizon": 3, "constructions": [{"id": "K", "kind": "cor34", "rho": "0"}]},
     "constructions[0].targets"),
    ({"horizon": 3, "constructions": [{"id": "K", "kind": "teleport"}]}, "constructions[0].kind"),
    ({"horizon": 3, "constructions": [{"id": "P", "kind": "padding", "operator": "W"}]},
     "constructions[0].operator"),
    ({"horizon": 3, "halting": {"events": [[5, 1]]}}, "halting.events[0][0]"),
    ({"horizon": 3, "operators": {"W": [{"string": "1", "appearance": 9}]}},
     "operators.W[0].appearance"),
    ({"horizon": 3, "reals": {"g": {"values": ["1/3"]}}}, "reals.g.values[0]"),
    ({"horizon": 3, "classes": ["NOPE"]}, "classes[0]"),
    ({"horizon": 3, "fault": {"target": "X", "kind": "drop", "input": "0"}}, "fault.target"),
])
def test_config_errors_name_key(doc, key):
    with pytest.raises(ConfigError) as info:
        parse_scenario(doc)
    assert str(info.value).startswith(key)


def test_construction_error_exit(tmp_path, capsys):
    doc = {"horizon": 2, "constructions": [{"id": "K", "kind": "cor34", "rho": "0",
                                            "targets": ["0", "1/2^1"]}]}
    assert main(["run", str(write(tmp_path, doc)), "--out", str(tmp_path / "o")]) == 3
    assert "CapacityExceeded" in capsys.readouterr().err


def test_padding_horizon_limit_is_construction_error(capsys):
    assert main(["verify", str(demo_path("lemma33_basic")), "--horizon", "5"]) == 3
    assert "HorizonExceeded" in capsys.readouterr().err


def test_missing_file_is_config_error(tmp_path):
    assert main(["verify", str(tmp_path / "nope.yaml")]) == 2


def test_load_scenario_fits_sequences():
    sc = load_scenario(demo_path("dce_universal"))
    assert len(sc.reals["a"].values) == sc.horizon + 1
    sc = load_scenario(demo_path("dce_universal"), horizon=3)
    assert len(sc.reals["b"].values) == 4
