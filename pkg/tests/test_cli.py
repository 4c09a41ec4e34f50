import json
import math

import pytest

from rankembed.cli import main
from rankembed.embedding import embedding_dumps, embedding_loads

WORKED = "5 2\n1 2 3 4 5\n2 4 5 1 3\n"


@pytest.fixture
def worked(tmp_path):
    path = tmp_path / "worked.txt"
    path.write_text(WORKED)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_embed_ar_worked_example(tmp_path, worked, capsys):
    out = tmp_path / "ar_c10.json"
    code, _, err = run(capsys, "embed", "--profile", worked, "--construction", "ar", "--norm", "p:2", "--c", "10", "--out", out)
    assert code == 0 and err.startswith("PASS margin=0.1072805704")
    emb = embedding_loads(out.read_text())
    assert emb.voters == ((10, 0), (0, 10))
    assert emb.alternatives[0] == (-1, -4) and emb.alternatives[4] == (-5, -3)


def test_embed_to_stdout(worked, capsys):
    code, out, _ = run(capsys, "embed", "--profile", worked, "--construction", "rank-pivot")
    assert code == 0 and json.loads(out)["construction"] == "rank-pivot"


def test_embed_plot_csv(tmp_path, worked, capsys):
    plot = tmp_path / "plot.csv"
    code, _, _ = run(capsys, "embed", "--profile", worked, "--construction", "ar", "--norm", "p:2", "--c", "10",
                     "--out", tmp_path / "e.json", "--plot-csv", plot)
    lines = plot.read_text().splitlines()
    assert code == 0 and lines[0] == "voter,alternative,rank,distance,v1,v2,a1,a2" and len(lines) == 11
    assert lines[1].split(",")[:3] == ["1", "1", "1"]


def test_embed_two_voter_weighted_sum(tmp_path, capsys):
    prof = tmp_path / "two.txt"
    prof.write_text("6 2\n3 1 6 2 5 4\n5 3 4 1 2 6\n")
    code, _, err = run(capsys, "embed", "--profile", prof, "--construction", "two-voter", "--norm", "sum:2*p1+5*p2",
                       "--out", tmp_path / "e.json")
    assert code == 0 and err.startswith("PASS")


def test_embed_ar_p1_is_usage_error(worked, capsys):
    code, _, err = run(capsys, "embed", "--profile", worked, "--construction", "ar", "--norm", "p:1")
    assert code == 2 and "max-rank or rank-pivot" in err


def test_c_only_with_ar(worked, capsys):
    code, _, err = run(capsys, "embed", "--profile", worked, "--construction", "median", "--norm", "p:2", "--c", "3")
    assert code == 2 and "--c" in err


def test_missing_file_is_io_error(tmp_path, capsys):
    code, _, _ = run(capsys, "embed", "--profile", tmp_path / "nope.txt", "--construction", "ar")
    assert code == 3


def test_bad_profile_is_usage_error(tmp_path, capsys):
    prof = tmp_path / "bad.txt"
    prof.write_text("3 1\n1 1 2\n")
    code, _, err = run(capsys, "embed", "--profile", prof, "--construction", "rank-pivot")
    assert code == 2 and "line 2" in err


def test_verify_pass(tmp_path, worked, capsys):
    emb_path = tmp_path / "ar_c10.json"
    run(capsys, "embed", "--profile", worked, "--construction", "ar", "--norm", "p:2", "--c", "10", "--out", emb_path)
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "--profile", worked, "--embedding", emb_path, "--out", report)
    data = json.loads(report.read_text())
    assert code == 0 and data["pass"] is True and data["mode"] == "float"
    assert data["margin"] == pytest.approx(math.sqrt(197) - math.sqrt(194), abs=1e-12)


def test_verify_swapped_alternatives_fail(tmp_path, capsys):
    prof = tmp_path / "one.txt"
    prof.write_text("3 1\n1 2 3\n")
    emb_path = tmp_path / "rp.json"
    run(capsys, "embed", "--profile", prof, "--construction", "rank-pivot", "--out", emb_path)
    doc = json.loads(emb_path.read_text())
    doc["alternatives"][0], doc["alternatives"][1] = doc["alternatives"][1], doc["alternatives"][0]
    emb_path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--profile", prof, "--embedding", emb_path, "--exact")
    data = json.loads(out)
    assert code == 1 and data["pass"] is False
    assert data["violations"] == [{"voter": 1, "better": 1, "worse": 2, "d_better": 7, "d_worse": 5}]


def test_verify_exact_rank_pivot(tmp_path, worked, capsys):
    emb_path = tmp_path / "rp.json"
    run(capsys, "embed", "--profile", worked, "--construction", "rank-pivot", "--out", emb_path)
    code, out, _ = run(capsys, "verify", "--profile", worked, "--embedding", emb_path, "--exact")
    data = json.loads(out)
    assert code == 0 and data["mode"] == "exact" and data["margin"] == 2


def test_verify_mismatch_is_usage_error(tmp_path, worked, capsys):
    emb_path = tmp_path / "rp.json"
    run(capsys, "embed", "--profile", worked, "--construction", "rank-pivot", "--out", emb_path)
    other = tmp_path / "other.txt"
    other.write_text("3 1\n1 2 3\n")
    code, _, _ = run(capsys, "verify", "--profile", other, "--embedding", emb_path)
    assert code == 2


def test_max_rank_warn_and_strict(tmp_path, capsys):
    prof = tmp_path / "rev.txt"
    prof.write_text("3 2\n1 2 3\n3 2 1\n")
    base = ["embed", "--profile", prof, "--construction", "max-rank", "--tie-break", "largest", "--exact",
            "--out", tmp_path / "e.json"]
    code, _, err = run(capsys, *base)
    assert code == 0 and "FAIL" in err and "WARN" in err
    assert "voter 2: a2 before a1 but d=19/2 vs 11/2" in err
    code, _, _ = run(capsys, *base, "--strict")
    assert code == 1


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert run(capsys, "gen", "--m", 5, "--n", 3, "--seed", 42, "--out", path)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith("# generated by rankembed gen seed=42")
    code, out, _ = run(capsys, "gen", "--m", 5, "--n", 3, "--seed", 42, "--format", "json")
    assert json.loads(out)["metadata"]["seed"] == 42


def test_gen_too_many_voters(capsys):
    assert run(capsys, "gen", "--m", 2, "--n", 3, "--seed", 0)[0] == 2


def test_experiment_c_growth(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, _, err = run(capsys, "experiment", "c-growth", "--n", 3, "--t-min", 20, "--t-max", 40, "--steps", 21,
                       "--out", out)
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == "t,c_inf,log_c" and len(lines) == 23
    slope = float(lines[-1].split("fitted_slope=")[1].split()[0])
    assert abs(slope - 2 * math.log(2)) <= 0.15 * 2 * math.log(2)
    assert "slope=" in err


def test_check_norm_square_file(tmp_path, capsys):
    square = tmp_path / "square.txt"
    square.write_text("1 1\n-1 1\n-1 -1\n1 -1\n")
    code, out, _ = run(capsys, "check-norm", "--norm", f"poly:{square}", "--samples", 10000)
    assert code == 0 and json.loads(out)["pass"] is True


def test_lemma2_cli(capsys):
    code, out, _ = run(capsys, "lemma2", "--m", 3, "--p", 2, "--samples", 200)
    assert code == 0 and json.loads(out)["failures"] == 0


def test_byte_identical_reruns(tmp_path, worked, capsys):
    outputs = []
    for k in range(2):
        e, r = tmp_path / f"e{k}.json", tmp_path / f"r{k}.json"
        run(capsys, "embed", "--profile", worked, "--construction", "two-voter", "--norm", "p:3", "--seed", 1, "--out", e)
        run(capsys, "verify", "--profile", worked, "--embedding", e, "--out", r)
        outputs.append((e.read_bytes(), r.read_bytes()))
    assert outputs[0] == outputs[1]


def test_embedding_file_roundtrips_through_loader(tmp_path, worked, capsys):
    e = tmp_path / "m.json"
    run(capsys, "embed", "--profile", worked, "--construction", "median", "--norm", "p:inf", "--out", e)
    assert embedding_dumps(embedding_loads(e.read_text())) == e.read_text()
