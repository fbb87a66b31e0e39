import io
import json
import subprocess
import sys

import pytest

from ratsquare.cli import RunConfig, main, run
from ratsquare.records import record_kind, validate_lines, validate_record


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(l) for l in text.splitlines()]


def test_search_summary(capsys):
    code, out, _ = invoke(capsys, "search", "--z-max", "100", "--min-count", "4", "--self-check")
    assert code == 0
    recs = records(out)
    assert recs[0]["version"] == "0.1.0"
    assert recs[-1]["hits4"] == 0 and recs[-1]["summary"] == "search"


def test_primes(capsys):
    code, out, _ = invoke(capsys, "primes", "--limit", "20")
    assert code == 0
    assert records(out)[1] == [3, 5, 7, 13, 17]


def test_usage_error_names_flag(capsys):
    code, _, err = invoke(capsys, "descent", "--family", "1", "--bound", "0")
    assert code == 2
    assert "--bound" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["search"])
    assert exc.value.code == 2
    assert "--z-max" in capsys.readouterr().err


def test_unknown_filter(capsys):
    code, _, err = invoke(capsys, "search", "--z-max", "5", "--filter", "on_corner")
    assert code == 2 and "--filter" in err


def test_counterexample_exit_code(capsys, caplog):
    code, out, err = invoke(capsys, "descent", "--family", "5", "--bound", "50")
    assert code == 10
    recs = records(out)
    assert {"family": 5, "a": 3, "b": 4, "e": 65} in recs
    assert any(r.get("step") == "split-shape" for r in recs)
    assert recs[-1]["counterexample"] is True
    assert "COUNTEREXAMPLE" in caplog.text


def test_clean_descent_exit(capsys):
    code, out, _ = invoke(capsys, "descent", "--family", "2", "--bound", "60")
    assert code == 0
    assert records(out)[-1]["hits"] == 0


def test_range_error_exit(capsys):
    code, _, err = invoke(capsys, "primes", "--limit", str(1 << 33))
    assert code == 3 and "2**64" in err
    code, _, err = invoke(capsys, "search", "--z-max", "100", "--budget", "100")
    assert code == 3 and "budget" in err


def test_forced_k_deviation_surfaced(capsys, caplog):
    code, out, err = invoke(capsys, "forced-k", "--mode", "theorem3", "--n", "5", "--bound", "200")
    assert code == 0
    probe = records(out)[1]
    assert probe["realized"] == [1, 29] and probe["deviations"] == [[1, 7, 130, 25, 24]]
    assert records(out)[-1]["matches_claim"] is False
    assert "deviation" in caplog.text


@pytest.mark.parametrize(
    "argv",
    [
        ["triples", "--max-hyp", "100"],
        ["search", "--z-max", "30", "--min-count", "3", "--region-extension", "1"],
        ["three-distance", "--max-hyp", "200"],
        ["descent", "--family", "6", "--bound", "100"],
        ["forced-k", "--mode", "theorem1", "--bound", "60"],
        ["primes", "--limit", "100"],
        ["heuristic", "--magnitudes", "16", "32", "64", "--mode", "sampled", "--trials", "2000"],
    ],
)
def test_self_check_every_subcommand(capsys, argv):
    code, out, _ = invoke(capsys, *argv, "--self-check")
    assert code in (0, 10)
    kinds = validate_lines(out.splitlines())
    assert kinds[0] == "header" and kinds[-1] == "summary"


def test_csv_projection(capsys):
    code, out, _ = invoke(capsys, "search", "--z-max", "5", "--min-count", "3", "--filter", "on_edge", "--output", "csv")
    lines = out.splitlines()
    assert lines[0].startswith("# {") and lines[-1].startswith("# {")
    assert lines[1] == "z,x,y,sq_dists,roots,count,tags"
    assert "4,3,0,9;25;17;1,3;5;;1,3,on_edge;n_times_distance(4)" in lines


def test_env_fallbacks(capsys, monkeypatch):
    monkeypatch.setenv("RATSQUARE_OUTPUT", "csv")
    monkeypatch.setenv("RATSQUARE_SEED", "5")
    code, out, _ = invoke(capsys, "primes", "--limit", "20")
    assert out.startswith("# ")
    assert '\\"seed\\":5' in out.splitlines()[0]


def test_workers_do_not_change_output(capsys):
    outs = []
    for w in ("1", "3"):
        code, out, _ = invoke(capsys, "search", "--z-max", "40", "--min-count", "3", "--workers", w)
        outs.append(out)
    assert outs[0] == outs[1]


def test_checkpoint_mismatch_prints_both(capsys, tmp_path):
    ck = str(tmp_path / "ck.jsonl")
    assert invoke(capsys, "search", "--z-max", "10", "--checkpoint", ck)[0] == 0
    code, _, err = invoke(capsys, "search", "--z-max", "12", "--checkpoint", ck)
    assert code == 3
    assert '"z_max":10' in err and '"z_max":12' in err


def test_run_with_config_object():
    buf = io.StringIO()
    cfg = RunConfig("triples", {"max_hyp": 13})
    assert run(cfg, buf) == 0
    recs = records(buf.getvalue())
    assert recs[1] == {"s": 2, "t": 1, "p": 4, "q": 3, "r": 5, "primitive": True}
    assert len(recs) == 4


def test_canonical_ignores_workers_and_checkpoint():
    a = RunConfig("primes", {"limit": 9}, workers=1)
    b = RunConfig("primes", {"limit": 9}, workers=8, checkpoint_path="x")
    assert a.canonical() == b.canonical()


def test_record_kinds():
    assert record_kind([3, 5]) == "multipliers"
    assert validate_record({"family": 1, "a": 2, "b": 1, "e": None}) == "equation"
    with pytest.raises(Exception):
        validate_record({"z": 0, "x": 1, "y": 1, "sq_dists": [1], "roots": [1], "count": 9, "tags": []})


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ratsquare", "primes", "--limit", "7"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "[3,5,7]"
