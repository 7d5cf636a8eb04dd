"""
End-to-end checks of the troptrans command line through main().
"""

import json

import pytest

from main import EXIT_OK, EXIT_PARSE_ERROR, EXIT_SEMANTIC_ERROR, main
from utils.matrix_io import loads_document

DIGRAPH4 = """\
# four nodes with the Hamiltonian cycle 1,2,3,4,1
.  0  .  .
.  0  0  .
0  .  .  0
0  0  .  .
"""


@pytest.fixture
def digraph4_file(isolated_env):
    path = isolated_env / "digraph4.txt"
    path.write_text(DIGRAPH4, encoding="utf-8")
    return path


def _json_out(capsys):
    return json.loads(capsys.readouterr().out)


def test_analyze_bundled_schwarz_instance(isolated_env, capsys):
    assert main(["analyze", "schwarz7", "--format", "json"]) == EXIT_OK
    report = _json_out(capsys)
    assert report["lambda"] == "0"
    assert report["irreducible"] is True
    assert report["cyclicity"] == 2
    node4 = next(entry for entry in report["nodes"] if entry["node"] == 4)
    assert node4["row"]["transient"] == 11
    assert node4["row"]["period"] == 6
    assert node4["row"]["index"] == 4
    assert node4["bounds"]["schwarz"] == 11
    assert node4["bounds"]["kim"] == 13


def test_analyze_text_output(isolated_env, capsys):
    assert main(["analyze", "wielandt5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "lambda: 0" in out
    assert "node 5: row T=17" in out


def test_analyze_with_hidden_input_flag(isolated_env, capsys):
    assert main(["analyze", "--input", "dulmage_mendelsohn5", "--format", "json"]) == EXIT_OK
    assert _json_out(capsys)["n"] == 5


def test_analyze_with_trivial_factorization(isolated_env, capsys):
    path = isolated_env / "factors.json"
    path.write_text(json.dumps({"V": [["0", "-1"], ["-1", "0"]], "W": [["0", "-inf"], ["-inf", "0"]]}))
    matrix = isolated_env / "m.txt"
    matrix.write_text("0 -1\n-1 0\n", encoding="utf-8")
    assert main(["analyze", str(matrix), "--factorization", str(path), "--format", "json"]) == EXIT_OK
    report = _json_out(capsys)
    assert report["factor_rank"] == 2
    for entry in report["nodes"]:
        main1 = {k: v for k, v in entry["bounds"].items() if k != "node" and v is not None}
        main2 = {k: v for k, v in entry["rank_bounds"].items() if k != "node" and v is not None}
        assert main2 == {k: v + 1 for k, v in main1.items()}


def test_nilpotent_matrix_is_a_semantic_error(isolated_env, capsys):
    path = isolated_env / "nilpotent.txt"
    path.write_text(". 0\n. .\n", encoding="utf-8")
    assert main(["analyze", str(path)]) == EXIT_SEMANTIC_ERROR
    assert "AcyclicMatrixError" in capsys.readouterr().err


@pytest.mark.parametrize(
    "content",
    ["1 2\n3\n", "# only a comment\n", "{not json", '{"n": 2, "entries": [["0"]]}', "a b\nc d\n"],
)
def test_malformed_matrices_are_parse_errors(isolated_env, content):
    path = isolated_env / "bad.txt"
    path.write_text(content, encoding="utf-8")
    assert main(["analyze", str(path)]) == EXIT_PARSE_ERROR


def test_missing_file_is_a_parse_error(isolated_env):
    assert main(["analyze", "no-such-matrix.json"]) == EXIT_PARSE_ERROR


def test_mismatched_factorization_is_a_semantic_error(isolated_env):
    path = isolated_env / "factors.json"
    path.write_text(json.dumps({"V": [["0"], ["0"], ["0"], ["0"], ["0"]], "W": [["0"], ["0"], ["0"], ["0"], ["0"]]}))
    assert main(["analyze", "wielandt5", "--factorization", str(path)]) == EXIT_SEMANTIC_ERROR


def test_pump_pads_an_edge_into_the_window(digraph4_file, capsys):
    args = ["pump", str(digraph4_file), "--hamiltonian", "1,2,3,4,1", "--walk", "1,2", "--format", "json"]
    assert main(args) == EXIT_OK
    report = _json_out(capsys)
    assert report["window"] == [10, 13]
    assert report["replaced_length"] == 13
    assert report["in_window"] and report["congruent"] and report["endpoints_kept"]
    assert report["replaced"].startswith("1,") and report["replaced"].endswith(",2")


def test_pump_text_output(digraph4_file, capsys):
    assert main(["pump", str(digraph4_file), "--hamiltonian", "1,2,3,4,1", "--walk", "1,2,3,4,1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "(length 12)" in out
    assert "FAILED" not in out
    assert out.count("[Check]") == 3


def test_pump_rejects_non_hamiltonian_cycle(digraph4_file):
    assert main(["pump", str(digraph4_file), "--hamiltonian", "1,2,3,1", "--walk", "1,2"]) == EXIT_SEMANTIC_ERROR


def test_verify_writes_report_to_output(isolated_env, capsys):
    out_path = isolated_env / "report.json"
    assert main(["verify", "main1", "--trials", "3", "--seed", "5", "--nmax", "4", "--output", str(out_path)]) == EXIT_OK
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["passed"] is True
    assert report["instances_checked"] == 3
    assert report["seed"] == 5
    assert "[Verify]" in capsys.readouterr().out


def test_verify_stores_run_under_data_dir(isolated_env):
    assert main(["verify", "pumping", "--trials", "0"]) == EXIT_OK
    runs = list((isolated_env / "data" / "runs").iterdir())
    assert len(runs) == 1
    metadata = json.loads((runs[0] / "metadata.json").read_text(encoding="utf-8"))
    assert metadata["status"] == "completed"
    assert metadata["suites"] == ["pumping"]
    assert (runs[0] / "pumping" / "report.json").exists()


def test_verify_rejects_unknown_suite(isolated_env):
    with pytest.raises(SystemExit):
        main(["verify", "main3"])


def test_gen_is_byte_reproducible(isolated_env, capsys):
    args = ["gen", "--n", "6", "--density", "0.4", "--seed", "17"]
    assert main(args) == EXIT_OK
    first = capsys.readouterr().out
    assert main(args) == EXIT_OK
    assert capsys.readouterr().out == first
    doc = loads_document(first)
    assert doc.n == 6
    assert doc.source.startswith("gen ")


def test_gen_planted_output_round_trips_through_analyze(isolated_env, capsys):
    path = isolated_env / "planted.json"
    assert main(["gen", "--n", "7", "--planted", "6,4", "--seed", "1", "--output", str(path)]) == EXIT_OK
    capsys.readouterr()
    assert main(["analyze", str(path), "--format", "json"]) == EXIT_OK
    report = _json_out(capsys)
    assert report["cyclicity"] == 2
    assert [c["size"] for c in report["components"]] == [6]


def test_gen_low_rank_carries_factorization(isolated_env, capsys):
    assert main(["gen", "--n", "5", "--rank", "2", "--seed", "4"]) == EXIT_OK
    doc = loads_document(capsys.readouterr().out)
    assert doc.factorization is not None
    assert len(doc.factorization.V[0]) == 2


def test_gen_rejects_conflicting_structures(isolated_env):
    assert main(["gen", "--n", "4", "--planted", "4,3", "--boolean"]) == EXIT_PARSE_ERROR
    assert main(["gen", "--n", "4", "--planted", "4,x"]) == EXIT_PARSE_ERROR
    assert main(["gen", "--n", "4", "--planted", "9"]) == EXIT_PARSE_ERROR


def test_bad_config_file_is_a_parse_error(isolated_env):
    path = isolated_env / "broken.json"
    path.write_text("{", encoding="utf-8")
    assert main(["--config", str(path), "analyze", "schwarz7"]) == EXIT_PARSE_ERROR
    assert main(["--config", str(isolated_env / "absent.json"), "analyze", "schwarz7"]) == EXIT_PARSE_ERROR


def test_matrix_cap_comes_from_config(isolated_env, capsys):
    assert main(["analyze", "wielandt5", "--format", "json"]) == EXIT_OK
    assert _json_out(capsys)["matrix_transient"]["transient"] >= 17
    path = isolated_env / "config.json"
    path.write_text(json.dumps({"matrix_cap": 5}), encoding="utf-8")
    assert main(["--config", str(path), "analyze", "wielandt5", "--format", "json"]) == EXIT_OK
    assert _json_out(capsys)["matrix_transient"] is None
