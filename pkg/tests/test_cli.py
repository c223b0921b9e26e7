import json

from linkform.cli import main

NIL = {"genus": 0, "pairs": [[2, 1], [2, 1], [2, 1], [2, -1]]}


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_compute_nil(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "compute", write(tmp_path, "nil.json", NIL))
    assert code == 0
    report = json.loads(out)
    assert report["euler"] == "-1"
    assert report["standard_form"] == {"atoms": [{"cyc": [2, 2, 3]}, {"E0": 1}]}
    assert report["structure"]["ok"]


def test_compute_flat_example(tmp_path, capsys):
    data = {"genus": 0, "pairs": [[3, 1], [3, 1], [3, -2]]}
    code, out, _ = run_cli(capsys, "compute", write(tmp_path, "s.json", data))
    assert code == 0
    report = json.loads(out)
    assert report["euler"] == "0"
    assert report["h1_free_rank"] == 1
    atoms = report["standard_form"]["atoms"]
    assert len(atoms) == 1 and atoms[0]["cyc"][:2] == [3, 1]


def test_compute_single_prime(tmp_path, capsys):
    data = {"genus": 0, "pairs": [[4, 1], [6, 1], [9, 2], [8, 3], [5, -4]]}
    code, out, _ = run_cli(
        capsys, "compute", write(tmp_path, "s.json", data), "--prime", "3"
    )
    assert code == 0
    report = json.loads(out)
    assert [e["prime"] for e in report["local"]] == [3]


def test_compute_invalid_data_exits_2(tmp_path, capsys):
    code, _, err = run_cli(capsys, "compute", write(tmp_path, "bad.json", {"pairs": [[4, 2]]}))
    assert code == 2
    assert "gcd" in err


def test_classify_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "classify", write(tmp_path, "nil.json", NIL), "--prime", "2"
    )
    assert code == 0
    report = json.loads(out)
    assert report["per_prime"]["2"]["standard_form"]["atoms"]


def test_realize_flat_e0(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "realize",
        write(tmp_path, "t.json", {"atoms": [{"E0": 2}]}),
        "--mode",
        "flat",
    )
    assert code == 0
    report = json.loads(out)
    assert report["verified"] is True
    assert report["seifert"]["pairs"] == [[4, -1], [4, 1], [4, -1], [4, 1]]


def test_realize_unrealizable_exits_3(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "realize", write(tmp_path, "t.json", {"atoms": [{"E0": 2}, {"E0": 1}]})
    )
    assert code == 3
    assert "even component" in err


def test_realize_sphere_lens(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "realize",
        write(tmp_path, "t.json", {"atoms": [{"cyc": [3, 1, 1]}]}),
        "--mode",
        "sphere",
    )
    assert code == 0
    report = json.loads(out)
    assert report["verified"] and len(report["seifert"]["pairs"]) == 2


def test_witt_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "witt", write(tmp_path, "nil.json", NIL))
    assert code == 0
    assert json.loads(out)["witt"] == {}


def test_verify_subcommand_deterministic(tmp_path, capsys):
    args = ["verify", "structure", "--trials", "25", "--seed", "11"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2  # byte-identical reports for identical configs


def test_verify_unknown_suite_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "verify", "nonsense")
    assert code == 1


def test_search_subcommand(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys,
        "search",
        write(tmp_path, "t.json", {"atoms": []}),
        "--max-r",
        "2",
        "--max-alpha",
        "3",
        "--max-beta",
        "2",
    )
    assert code == 0
    report = json.loads(out)
    assert report["count"] >= 1


def test_seed_env_default(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LINKFORM_SEED", "99")
    code, out, _ = run_cli(capsys, "verify", "structure", "--trials", "10")
    assert code == 0
    assert json.loads(out)["seed"] == 99


def test_json_out_flag(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "compute", write(tmp_path, "nil.json", NIL), "--json-out", str(out_path)
    )
    assert code == 0 and out == ""
    assert json.loads(out_path.read_text())["euler"] == "-1"
