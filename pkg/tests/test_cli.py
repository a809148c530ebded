import json
from pathlib import Path

import pytest

from tenrank.cli import main
from tenrank.decomp import builtin_state, decomposition_to_json, ghz_decomposition
from tenrank.tensors import tensor_from_json

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- state ----------------------------------------------------------------------


def test_state_phi3(capsys):
    code, out, _ = run(capsys, "state", "PHI3")
    assert code == 0
    assert "dims [4, 4, 4]" in out and "nonzeros 8" in out


def test_state_ghz_copies(capsys):
    code, out, _ = run(capsys, "state", "GHZ", "--n", "3")
    assert code == 0
    assert "dims [8, 8, 8]" in out and "nonzeros 8" in out


def test_state_w2_nonzero_count(capsys):
    code, out, _ = run(capsys, "state", "W2")
    assert code == 0
    assert "nonzeros 9" in out


def test_state_unknown_name_exits_2(capsys):
    code, _, err = run(capsys, "state", "NOSUCH")
    assert code == 2
    assert "error" in err


def test_state_out_round_trips(capsys, tmp_path):
    out_file = tmp_path / "phi3.json"
    code, _, _ = run(capsys, "state", "PHI3", "--out", str(out_file))
    assert code == 0
    loaded = tensor_from_json(json.loads(out_file.read_text()))
    assert loaded == builtin_state("PHI3")


def test_state_parse_failure_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "state", str(bad))
    assert code == 2 and "JSON" in err


def test_state_matmul_golden(capsys, tmp_path):
    out_file = tmp_path / "mm.json"
    code, _, _ = run(capsys, "state", "MATMUL", "--dims", "2", "2", "2",
                     "--out", str(out_file))
    assert code == 0
    assert json.loads(out_file.read_text()) == json.loads(
        (GOLDEN / "matmul222.json").read_text()
    )


# -- rank -----------------------------------------------------------------------


def test_rank_phi3_with_packaged_witness(capsys):
    code, out, _ = run(capsys, "rank", "PHI3", "--witness", "strassen7-phi3.json")
    assert code == 0
    assert "upper=7 lower=7 rank=7" in out


def test_rank_ghz_builtin_upper(capsys):
    code, out, _ = run(capsys, "rank", "GHZ")
    assert code == 0
    assert "upper=2 lower=2 rank=2" in out


def test_rank_w_als_border(capsys):
    code, out, _ = run(capsys, "rank", "W", "--als", "2")
    assert code == 0
    assert "NotFound" in out and "border_flag=true" in out


def test_rank_witness_mismatch_exits_3(capsys):
    code, out, _ = run(capsys, "rank", "W2", "--witness", "strassen7.json")
    assert code == 3
    assert "MISMATCH" in out


def test_rank_json_mode(capsys):
    code, out, _ = run(capsys, "--json", "rank", "PHI3",
                       "--witness", "strassen7-phi3.json")
    assert code == 0
    payload = json.loads(out)
    assert payload["flattening_ranks"] == {"A": 4, "B": 4, "C": 4}
    assert payload["known_rank"]["rank"] == 7
    assert payload["witness"] == {"ok": True, "terms": 7}
    assert payload["upper"] == 7 and payload["lower"] == 7


# -- verify ----------------------------------------------------------------------


def test_verify_exact_match(capsys):
    code, out, _ = run(capsys, "verify", "MATMUL", "--witness", "strassen7.json")
    assert code == 0 and "ExactMatch" in out


def test_verify_mismatch_exits_3(capsys):
    code, out, _ = run(capsys, "verify", "W2", "--witness", "strassen7.json")
    assert code == 3 and "Mismatch at index" in out


def test_verify_user_file(capsys, tmp_path):
    witness = tmp_path / "ghz4.json"
    witness.write_text(json.dumps(decomposition_to_json(ghz_decomposition(4))))
    code, out, _ = run(capsys, "verify", "GHZ", "--n", "2", "--witness", str(witness))
    assert code == 0 and "ExactMatch (4 terms)" in out


# -- convert ---------------------------------------------------------------------


def test_convert_w2_yes_with_simulation(capsys, tmp_path):
    protocol_file = tmp_path / "protocol.json"
    code, out, _ = run(capsys, "convert", "W2", "--ghz", "8",
                       "--witness", "fiduccia8.json", "--simulate",
                       "--out", str(protocol_file))
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert lines[0]["verdict"] == "yes"
    assert lines[1]["fidelity"] >= 1 - 1e-10
    assert lines[1]["probability"] > 0
    payload = json.loads(protocol_file.read_text())
    assert payload["source_dim"] == 8 and payload["success_probability"] > 0


def test_convert_phi3_no_exits_4(capsys):
    code, out, _ = run(capsys, "convert", "PHI3", "--ghz", "4")
    assert code == 4
    assert json.loads(out.strip().splitlines()[0])["verdict"] == "no"


def test_convert_phi3_seven_levels_yes(capsys, tmp_path):
    out_file = tmp_path / "phi3-protocol.json"
    code, out, _ = run(capsys, "convert", "PHI3", "--ghz", "7",
                       "--witness", "strassen7-phi3.json", "--simulate",
                       "--out", str(out_file))
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert lines[0]["verdict"] == "yes"
    assert lines[1]["fidelity"] >= 1 - 1e-10
    assert json.loads(out_file.read_text())["source_dim"] == 7


def test_convert_witness_mismatch_exits_3(capsys):
    code, _, err = run(capsys, "convert", "W2", "--ghz", "8",
                       "--witness", "strassen7.json")
    assert code == 3
    assert "mismatch" in err


def test_rank_als_writes_float_decomposition(capsys, tmp_path):
    out_file = tmp_path / "ghz-float.json"
    code, out, _ = run(capsys, "rank", "GHZ", "--als", "2", "--out", str(out_file))
    assert code == 0 and "Found" in out
    payload = json.loads(out_file.read_text())
    assert payload["exact"] is False and len(payload["terms"]) == 2


def test_convert_unknown_exits_5(capsys):
    # W(x)W at five levels: flattening bound 4 passes, no registered fact,
    # and the numeric search cannot certify an exact 5-term witness
    code, out, _ = run(capsys, "convert", "W2", "--ghz", "5")
    assert code == 5
    assert json.loads(out.strip().splitlines()[0])["verdict"] == "unknown"


# -- classify ---------------------------------------------------------------------


def test_classify_representatives(capsys):
    assert run(capsys, "classify", "W")[1].strip() == "w"
    assert run(capsys, "classify", "GHZ")[1].strip() == "ghz"


def test_classify_wrong_dims_exits_2(capsys):
    code, _, err = run(capsys, "classify", "PHI3")
    assert code == 2 and "error" in err


# -- matmul -----------------------------------------------------------------------


def test_matmul_check_small(capsys):
    code, out, _ = run(capsys, "matmul", "--n", "3", "--check")
    assert code == 0
    assert "nonscalar_mults=343" in out and "exact match vs naive" in out


def test_matmul_scalar_case(capsys):
    code, out, _ = run(capsys, "matmul", "--n", "0")
    assert code == 0 and "nonscalar_mults=1" in out


def test_matmul_check_cap(capsys):
    code, _, err = run(capsys, "matmul", "--n", "11", "--check")
    assert code == 2 and "--n <= 10" in err


def test_matmul_bench_line(capsys):
    code, out, _ = run(capsys, "matmul", "--n", "2", "--bench")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"n", "cutoff", "nonscalar_mults", "additions", "wall_ns"}
    assert payload["nonscalar_mults"] == 49
    assert payload["wall_ns"] > 0


def test_matmul_json_mode(capsys):
    code, out, _ = run(capsys, "--json", "matmul", "--n", "2", "--check")
    assert code == 0
    payload = json.loads(out)
    assert payload["nonscalar_mults"] == 49 and payload["check"] == "ok"


# -- demos ------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["nonadditivity", "ghz3-to-w2", "ghz-to-phi3",
                                  "epr-rate"])
def test_demos_pass(capsys, name):
    code, out, _ = run(capsys, "demo", name)
    assert code == 0
    assert "FAIL" not in out and "PASS" in out


def test_demo_json_mode(capsys):
    code, out, _ = run(capsys, "--json", "demo", "nonadditivity")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True
    assert all(check["ok"] for check in payload["checks"])


def test_demo_epr_rate_accounting(capsys):
    code, out, _ = run(capsys, "--json", "demo", "epr-rate")
    assert code == 0
    payload = json.loads(out)
    assert "18" in payload["summary"] and "17" in payload["summary"]


# -- determinism --------------------------------------------------------------------


def test_rank_als_deterministic_given_seed(capsys):
    first = run(capsys, "rank", "W", "--als", "3", "--seed", "7")
    second = run(capsys, "rank", "W", "--als", "3", "--seed", "7")
    assert first == second


def test_matmul_deterministic_given_seed(capsys):
    first = run(capsys, "--json", "matmul", "--n", "2", "--seed", "3")
    second = run(capsys, "--json", "matmul", "--n", "2", "--seed", "3")
    assert first == second


# -- packaged witnesses are re-verified, never trusted ------------------------------


def test_packaged_witnesses_verify_against_their_targets():
    from importlib import resources

    from tenrank.bilinear import matmul_tensor
    from tenrank.decomp import decomposition_from_json, verify_decomposition

    targets = {
        "strassen7.json": matmul_tensor(2, 2, 2),
        "strassen7-phi3.json": builtin_state("PHI3"),
        "fiduccia8.json": builtin_state("W2"),
    }
    for name, target in targets.items():
        payload = json.loads(
            resources.files("tenrank").joinpath("witnesses", name).read_text()
        )
        witness = decomposition_from_json(payload)
        assert verify_decomposition(target, witness).ok
