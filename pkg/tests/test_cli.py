import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import generated_nets
from dunicast.cli import (code_from_text, code_to_dot, code_to_text, main, network_from_text,
                          network_to_text)
from dunicast.codec import Gf2Vec2, NetworkCode
from dunicast.errors import FormatError
from dunicast.instances import NAMES, canned

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,golden,status", [
    (["check", GOLDEN / "bottleneck.net.json"], "check_bottleneck.json", 2),
    (["check", GOLDEN / "butterfly.net.json"], "check_butterfly.json", 0),
    (["synthesize", GOLDEN / "butterfly.net.json"], "synthesize_butterfly.json", 0),
    (["synthesize", GOLDEN / "grail.net.json", "--emit", "dot"], "synthesize_grail.dot", 0),
    (["gen", "--seed", "3"], "gen_seed3.net.json", 0),
    (["region", GOLDEN / "bottleneck.net.json", "1/2", "1/2"], "region_bottleneck.json", 0),
])
def test_golden_output(capsys, argv, golden, status):
    code, out, _ = run(capsys, *argv)
    assert code == status
    assert out == (GOLDEN / golden).read_text()


@pytest.mark.parametrize("name", NAMES)
def test_canned_export_matches_files(capsys, name):
    code, out, _ = run(capsys, "gen", "--canned", name.lower())
    assert code == 0
    assert network_from_text(out) == canned(name)


def test_check_report_content(capsys):
    _, out, _ = run(capsys, "check", GOLDEN / "bottleneck.net.json")
    report = json.loads(out)
    assert report["feasible_11"] is False
    assert report["region"]["describe"] == "r1+r2<=1"
    assert report["symmetric_capacity"] == "1/2"
    assert [e["blocking"] for e in report["candidate_edges"]] == [True]


def test_check_disconnected(tmp_path, capsys):
    f = tmp_path / "net.json"
    f.write_text(json.dumps({"nodes": ["s1", "s2", "t1", "t2"],
                             "edges": [{"id": 0, "tail": "s1", "head": "t1"}],
                             "s1": "s1", "s2": "s2", "t1": "t1", "t2": "t2"}))
    code, out, _ = run(capsys, "check", f)
    assert code == 2
    assert json.loads(out)["symmetric_capacity"] == "0"


def test_cycle_is_an_error(tmp_path, capsys):
    f = tmp_path / "cyc.json"
    f.write_text(json.dumps({
        "nodes": ["s1", "s2", "t1", "t2", "a", "b"],
        "edges": [{"id": 0, "tail": "a", "head": "b"}, {"id": 1, "tail": "b", "head": "a"}],
        "s1": "s1", "s2": "s2", "t1": "t1", "t2": "t2"}))
    code, _, err = run(capsys, "check", f)
    assert code == 1 and "CycleDetected" in err


@pytest.mark.parametrize("text", [
    "not json", "[]", '{"nodes": []}',
    '{"nodes": ["a", "a"], "edges": [], "s1": "a", "s2": "a", "t1": "a", "t2": "a"}',
    '{"nodes": ["s1", "t1"], "edges": [{"id": 0, "tail": "s1"}],'
    ' "s1": "s1", "s2": "s1", "t1": "t1", "t2": "t1"}',
    '{"nodes": ["s1", "t1"], "edges": [{"id": 0, "tail": "s1", "head": "zz"}],'
    ' "s1": "s1", "s2": "s1", "t1": "t1", "t2": "t1"}',
    '{"nodes": ["s1", "t1"], "edges": [], "s1": "s1", "s2": "s1", "t1": "s1", "t2": "t1"}',
])
def test_malformed_network_files(text):
    with pytest.raises(FormatError):
        network_from_text(text)


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/net.json")
    assert code == 1 and "error" in err


def test_usage_error_exits_one(capsys):
    assert run(capsys, "simulate", GOLDEN / "butterfly.net.json")[0] == 1
    assert run(capsys, "region", GOLDEN / "butterfly.net.json", "x", "1")[0] == 1


def test_synthesize_writes_code_and_labels(tmp_path, capsys):
    out_file = tmp_path / "code.json"
    code, out, _ = run(capsys, "synthesize", GOLDEN / "butterfly.net.json", "--out", out_file)
    assert code == 0
    assert out_file.read_text() == (GOLDEN / "butterfly.code.json").read_text()
    rows = {(r["tail"], r["head"]): r["label"] for r in json.loads(out)["edges"]}
    assert rows["m", "n"] == "x1+x2"


def test_synthesize_disjoint_routes(tmp_path, capsys):
    f = tmp_path / "d.json"
    f.write_text(network_to_text(canned("DISJOINT")))
    _, out, _ = run(capsys, "synthesize", f)
    assert sorted(r["label"] for r in json.loads(out)["edges"]) == ["x1", "x2"]


def test_synthesize_infeasible(capsys):
    code, _, err = run(capsys, "synthesize", GOLDEN / "bottleneck.net.json")
    assert code == 2 and "infeasible" in err


def test_verify_and_simulate(capsys):
    net_file, code_file = GOLDEN / "butterfly.net.json", GOLDEN / "butterfly.code.json"
    code, out, _ = run(capsys, "verify", net_file, code_file)
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "simulate", net_file, code_file, 1, 1)
    assert code == 0 and json.loads(out)["decoded"] == [1, 1]


def test_verify_rejects_partial_code(tmp_path, capsys):
    f = tmp_path / "c.json"
    f.write_text('{"code": {"2": [1, 1]}}')
    code, out, _ = run(capsys, "verify", GOLDEN / "butterfly.net.json", f)
    assert code == 2 and not json.loads(out)["valid"]
    code, out, _ = run(capsys, "simulate", GOLDEN / "butterfly.net.json", f, 0, 1)
    assert code == 2


@pytest.mark.parametrize("text", ["[]", '{"code": {"x": [1, 0]}}', '{"code": {"0": [1]}}',
                                  '{"code": {"0": [2, 0]}}', '{"code": {"99": [1, 0]}}'])
def test_malformed_code_files(text, butterfly):
    with pytest.raises(ValueError):
        code_from_text(butterfly, text)


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", GOLDEN / "bottleneck.net.json")
    assert code == 2 and json.loads(out)["verdict"] == "no scalar code exists"
    code, out, _ = run(capsys, "oracle", GOLDEN / "butterfly.net.json")
    assert code == 0 and json.loads(out)["found"]
    code, _, err = run(capsys, "oracle", GOLDEN / "grail.net.json", "--max-oracle", 2)
    assert code == 1 and "OracleTooLarge" in err


def test_region_outside(capsys):
    code, out, _ = run(capsys, "region", GOLDEN / "bottleneck.net.json", "2/3", "2/3")
    assert code == 2 and json.loads(out)["member"] is False
    code, out, _ = run(capsys, "region", GOLDEN / "butterfly.net.json", "1", "1")
    assert code == 0 and json.loads(out)["member"] is True


def test_dot_marks_idle_edges():
    net = canned("BUTTERFLY")
    dot = code_to_dot(net, NetworkCode.zero(net))
    assert "label" not in dot and dot.count("style=dashed") == len(net.dag.edges)


@given(generated_nets(node_count=(4, 12), edge_count=(0, 30)))
def test_network_round_trip(net):
    text = network_to_text(net)
    assert network_from_text(text) == net
    assert network_to_text(network_from_text(text)) == text


@given(generated_nets(), st.data())
def test_code_round_trip(net, data):
    values = st.sampled_from(list(Gf2Vec2))
    code = NetworkCode.from_mapping(net, {e.id: data.draw(values) for e in net.dag.edges})
    assert code_from_text(net, code_to_text(code)) == code


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "dunicast.cli", "check",
                          str(GOLDEN / "butterfly.net.json")], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout == (GOLDEN / "check_butterfly.json").read_text()
