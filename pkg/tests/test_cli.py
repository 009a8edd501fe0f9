import csv
import io as _io
import json

import pytest

from conftest import perturbed
from udgclique import io
from udgclique.cli import EXIT_BUDGET, EXIT_CERTIFICATE, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from udgclique.generators import Instance, random_udg


@pytest.fixture
def inst_path(tmp_path):
    p = tmp_path / "inst.json"
    io.save_instance(p, random_udg(20, 3, 7))
    return p


def solve(capsys, *args):
    code = main(["solve", *map(str, args)])
    return code, json.loads(capsys.readouterr().out)


def test_solve_report(capsys, inst_path):
    code, rep = solve(capsys, inst_path, "--algo", "mincp2", "--epsilon", "1")
    assert code == EXIT_OK
    assert rep["valid"] and rep["outcome"] == "partition"
    assert rep["params"]["beta"] == 30
    assert io.unrat(rep["oracle"]["value"]) <= rep["size"]
    assert "wall_time" not in rep


def test_timing_flag(capsys, inst_path):
    _, rep = solve(capsys, inst_path, "--algo", "grid-baseline", "--timing")
    assert "wall_time" in rep


def test_certificate_exit(capsys, tmp_path):
    p = tmp_path / "bad.json"
    io.save_instance(p, Instance(None, perturbed(random_udg(25, 2, 100).graph, 0)))
    code, rep = solve(capsys, p, "--algo", "mincp2", "--epsilon", "1")
    assert code == EXIT_CERTIFICATE and rep["certificate"]["reason"] == "InconsistentQuadrilateral"


def test_usage_errors(capsys, tmp_path, inst_path):
    assert main(["solve", str(tmp_path / "missing.json"), "--algo", "mincp2"]) == EXIT_USAGE
    assert main(["solve", str(inst_path), "--algo", "nope"]) == EXIT_USAGE
    assert main(["solve", str(inst_path), "--algo", "mincp1", "--epsilon", "abc"]) == EXIT_USAGE


def test_budget_exit(capsys, tmp_path):
    p = tmp_path / "dense.json"
    io.save_instance(p, random_udg(40, 1, 0))
    assert main(["solve", str(p), "--algo", "mincp1", "--max-cell", "5"]) == EXIT_BUDGET


def test_verify(capsys, tmp_path, inst_path):
    good = tmp_path / "good.json"
    bad = tmp_path / "bad.json"
    g = io.load_instance(inst_path).graph
    good.write_text(json.dumps([[v] for v in range(g.n)]))
    bad.write_text(json.dumps([[0]]))
    assert main(["verify", str(inst_path), str(good)]) == EXIT_OK
    assert main(["verify", str(inst_path), str(bad)]) == EXIT_FAILED


def test_compare_csv(capsys, inst_path):
    assert main(["compare", str(inst_path), "--algos", "mincp1,grid-baseline"]) == EXIT_OK
    rows = list(csv.DictReader(_io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 2 and {r["algorithm"] for r in rows} == {"mincp1", "grid-baseline"}


def test_plot_svg(capsys, inst_path):
    assert main(["plot", str(inst_path)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("<svg")


def test_generate(capsys):
    assert main(["generate", "--spec", "two_kgon", "--k", "5"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    inst = io.instance_from_json(data)
    assert inst.n == 10 and inst.weights is not None
