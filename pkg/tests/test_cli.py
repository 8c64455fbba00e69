import shutil

import pytest
from fastapi.testclient import TestClient

from fsdisc.cli import build_parser, main
from fsdisc.service import create_app

from .conftest import data_path

FAST = ["--runs", "1", "--pop", "6", "--gens", "2", "--folds", "5"]


def test_flags_exist():
    args = build_parser().parse_args(
        "--data d.csv --label-col 3 --learner svm --wrapper c45 --runs 2 --folds 4 --pop 8 --gens 9 "
        "--cx-rate 0.7 --mut-rate 0.2 --tol 0.01 --stall-secs 5 --seed 1 --out o --emit-front "
        "--log-generations --report-wrapper-score".split()
    )
    assert (args.label_col, args.learner, args.wrapper, args.pop, args.gens) == (3, "svm", "c45", 8, 9)
    assert args.emit_front and args.log_generations and args.report_wrapper_score


def test_out_dir_from_environment(monkeypatch):
    monkeypatch.setenv("FSDISC_OUT", "/tmp/elsewhere")
    assert build_parser().parse_args(["--data", "x"]).out == "/tmp/elsewhere"


def test_local_run(tmp_path, capsys):
    out = tmp_path / "res"
    rc = main(["--data", str(data_path("iris")), "--out", str(out), "--emit-front", "--log-generations", *FAST])
    assert rc == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [
        "generations_iris_nb_run00.tsv",
        "pareto_iris_nb_run00.csv",
        "report_iris_nb.json",
        "summary_iris_nb.tsv",
    ]
    assert capsys.readouterr().out.startswith("iris\t4\t")


def test_remote_matches_local(tmp_path):
    local, remote = tmp_path / "local", tmp_path / "remote"
    base = ["--data", str(data_path("iris")), "--seed", "4", *FAST]
    assert main(base + ["--out", str(local)]) == 0
    with TestClient(create_app()) as client:
        assert main(base + ["--out", str(remote), "--poll", "0.02"], client=client) == 0
    for name in ("summary_iris_nb.tsv", "report_iris_nb.json"):
        assert (local / name).read_bytes() == (remote / name).read_bytes()


@pytest.mark.parametrize(
    "argv, message",
    [
        (["--data", "missing.csv"], "no such data file"),
        (["--runs", "0"], "--runs"),
        (["--label-col", "nope"], "not found"),
    ],
)
def test_errors_exit_nonzero(tmp_path, capsys, argv, message):
    if argv[0] != "--data":
        src = tmp_path / "iris.csv"
        shutil.copy(data_path("iris"), src)
        argv = ["--data", str(src), *argv]
    rc = main(argv + ["--out", str(tmp_path / "o")])
    assert rc != 0
    assert message in capsys.readouterr().err


def test_bad_choice_exits_nonzero():
    with pytest.raises(SystemExit) as exc:
        main(["--data", "x", "--learner", "knn"])
    assert exc.value.code != 0
