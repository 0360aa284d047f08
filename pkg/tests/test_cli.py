import json
import random

import pytest

from _support import connected_gnp
from inducedsub.cli import EXIT_BUDGET, EXIT_IO, EXIT_MALFORMED, EXIT_NEGATIVE, EXIT_OK, main, oracle_diff
from inducedsub.graph import petersen_graph, star_graph, to_graph6, to_json_obj
from inducedsub.planted import planted_main_unbalanced


@pytest.fixture
def petersen(tmp_path):
    p = tmp_path / "petersen.g6"
    p.write_bytes(to_graph6(petersen_graph()))
    return p


def test_find_then_verify(tmp_path, petersen):
    cert = tmp_path / "cert.json"
    assert main(["find", str(petersen), "4", "--out", str(cert)]) == EXIT_OK
    assert main(["verify", str(cert), str(petersen)]) == EXIT_OK
    # Petersen only has induced K4-subdivisions with adjacent branch vertices
    assert main(["verify", str(cert), str(petersen), "--proper"]) == EXIT_NEGATIVE


def test_find_negative_and_budget(tmp_path, petersen):
    star = tmp_path / "star.g6"
    star.write_bytes(to_graph6(star_graph(6)))
    assert main(["find", str(star), "3"]) == EXIT_NEGATIVE
    dense = tmp_path / "dense.g6"
    dense.write_bytes(to_graph6(connected_gnp(30, 0.3, random.Random(0))))
    assert main(["find", str(dense), "5", "--budget", "1"]) == EXIT_BUDGET
    assert main(["find", str(petersen), "2"]) == EXIT_MALFORMED


def test_malformed_and_io(tmp_path, petersen, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "edges": [[0, 1]')
    assert main(["invariants", str(bad)]) == EXIT_MALFORMED
    assert main(["invariants", str(tmp_path / "missing.g6")]) == EXIT_IO
    assert main(["verify", str(bad), str(petersen)]) == EXIT_MALFORMED
    assert main(["construct", "plane", "6"]) == EXIT_MALFORMED


def test_invariants_output(petersen, capsys):
    assert main(["invariants", str(petersen)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["girth"] == 5 and out["degeneracy"] == 3 and out["connectivity"] == 3


def test_construct(tmp_path, capsys):
    assert main(["construct", "plane", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["q"] == 2
    out = tmp_path / "inc.json"
    assert main(["construct", "incidence", "5", "--out", str(out), "--format", "json"]) == EXIT_OK
    assert json.loads(out.read_text())["n"] == 62
    assert main(["construct", "regular", "3", "10", "6"]) == EXIT_NEGATIVE


def _descriptor(tmp_path, **extra):
    P = planted_main_unbalanced(N=40, seed=1)
    desc = {"op": "main_theorem", "graph": to_json_obj(P.graph), "k": 4, "seed": 2, **extra}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(desc))
    return path


def test_pipeline_writes_verified_certificate_deterministically(tmp_path):
    desc = _descriptor(tmp_path)
    outs = []
    for i in range(2):
        trace, cert = tmp_path / f"t{i}.json", tmp_path / f"c{i}.json"
        assert main(["pipeline", str(desc), "--trace", str(trace), "--cert", str(cert)]) == EXIT_OK
        outs.append((trace.read_bytes(), cert.read_bytes()))
    assert outs[0] == outs[1]


def test_pipeline_failures(tmp_path, petersen):
    desc = tmp_path / "p.json"
    desc.write_text(json.dumps({"op": "main_theorem", "graph": petersen.name, "k": 3, "profile": "paper"}))
    trace, cert = tmp_path / "t.json", tmp_path / "c.json"
    assert main(["pipeline", str(desc), "--trace", str(trace), "--cert", str(cert)]) == EXIT_NEGATIVE
    assert trace.exists() and not cert.exists()
    assert "main/girth" in trace.read_text()
    desc.write_text(json.dumps({"op": "nope", "graph": petersen.name}))
    assert main(["pipeline", str(desc)]) == EXIT_MALFORMED


def test_oracle_diff_clean():
    assert oracle_diff(200, 8, 0, 100_000) == []
    assert main(["oracle-diff", "--count", "50", "--max-n", "7"]) == EXIT_OK
