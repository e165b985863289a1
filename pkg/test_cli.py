"""
test_cli.py

End-to-end runs of the hwd command line: reports on stdout, documents and
binary files on disk, exit codes.
"""

import json

import pytest

from app import EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(["-q", *map(str, argv)])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def checks(report) -> dict:
    return {check["name"]: check for check in report["invariants"]}


@pytest.fixture
def geometric_file(tmp_path, capsys):
    path = tmp_path / "geo.txt"
    code, report = run(capsys, "generate", "--kind", "random-geometric", "--param", "n=14", "--param", "radius=0.5",
                       "--seed", 5, "--out", path)
    assert code == EXIT_OK
    assert report["metrics"]["vertices"] == 14
    return path


@pytest.fixture
def clustered_files(tmp_path, capsys):
    path = tmp_path / "towns.txt"
    code, report = run(capsys, "generate", "--kind", "clustered-towns", "--param", "clusters=3", "--param", "leaves=2",
                       "--out", path)
    assert code == EXIT_OK
    return path, report["metrics"]["terminals_path"]


# ==========================================================
# COVERS AND HIERARCHIES
# ==========================================================


def test_star_spc_has_one_hub(tmp_path, capsys):
    path = tmp_path / "star.txt"
    run(capsys, "generate", "--kind", "star", "--param", "leaves=6", "--out", path)
    doc = tmp_path / "spc.json"
    code, report = run(capsys, "spc", "--in", path, "--r", 1, "--eps", 0, "--out", doc)
    assert code == EXIT_OK
    assert report["metrics"]["hubs"] == 1
    assert json.loads(doc.read_text())["hubs"] == [0]
    assert report["input"]["vertices"] == 7

    code, report = run(capsys, "verify", "--in", path, "--doc", doc)
    assert code == EXIT_OK
    assert checks(report)["spc_valid"]["ok"]


def test_removed_hub_fails_verification(tmp_path, capsys):
    path = tmp_path / "star.txt"
    run(capsys, "generate", "--kind", "star", "--out", path)
    doc = tmp_path / "spc.json"
    run(capsys, "spc", "--in", path, "--r", 1, "--eps", 0, "--out", doc)
    data = json.loads(doc.read_text())
    data["hubs"] = [1]
    doc.write_text(json.dumps(data))
    code, report = run(capsys, "verify", "--in", path, "--doc", doc)
    assert code == EXIT_INVARIANT
    assert not checks(report)["spc_valid"]["ok"]
    assert checks(report)["spc_valid"]["witness"]


def test_hierarchy_document_verifies(geometric_file, tmp_path, capsys):
    doc = tmp_path / "h.json"
    code, report = run(capsys, "hierarchy", "--in", geometric_file, "--out", doc)
    assert code == EXIT_OK
    assert report["input"]["scale"] > 1
    assert json.loads(doc.read_text())["scale"] == report["input"]["scale"]
    code, report = run(capsys, "verify", "--in", geometric_file, "--doc", doc)
    assert code == EXIT_OK
    assert set(checks(report)) == {"packing", "levels_are_covers"}


def test_partition_document_verifies(geometric_file, tmp_path, capsys):
    doc = tmp_path / "p.json"
    code, report = run(capsys, "decompose", "--in", geometric_file, "--delta", 0.6, "--trials", 3,
                       "--gamma", 0.0625, "--seed", 2, "--out", doc)
    assert code == EXIT_OK
    assert {"partition_trial_0", "partition_trial_2"} <= set(checks(report))
    assert report["metrics"]["padding"]["trials"] >= 1
    code, report = run(capsys, "verify", "--in", geometric_file, "--doc", doc)
    assert code == EXIT_OK


def test_tampered_cover_fails_with_witnesses(geometric_file, tmp_path, capsys):
    doc = tmp_path / "c.json"
    code, _ = run(capsys, "cover", "--in", geometric_file, "--delta", 0.8, "--out", doc)
    assert code == EXIT_OK
    code, _ = run(capsys, "verify", "--in", geometric_file, "--doc", doc)
    assert code == EXIT_OK

    data = json.loads(doc.read_text())
    data["clusters"][0]["members"].pop()
    doc.write_text(json.dumps(data))
    code, report = run(capsys, "verify", "--in", geometric_file, "--doc", doc)
    assert code == EXIT_INVARIANT
    failed = [check for check in report["invariants"] if not check["ok"]]
    assert failed and all(check["witness"] for check in failed)
    recount = checks(report)["sparsity_recount"]["witness"]
    assert recount["actual"] != recount["stored"]


def test_partition_cover_runs(geometric_file, tmp_path, capsys):
    code, report = run(capsys, "partition-cover", "--in", geometric_file, "--delta", 0.8)
    assert code == EXIT_OK
    assert report["metrics"]["partitions"] >= 1


# ==========================================================
# TREE COVERS AND ORACLES
# ==========================================================


def test_saved_tree_cover_verifies(geometric_file, tmp_path, capsys):
    binary = tmp_path / "tc.bin"
    summary = tmp_path / "tc.json"
    code, report = run(capsys, "treecover", "--in", geometric_file, "--eps", 1.0, "--save", binary, "--out", summary)
    assert code == EXIT_OK
    assert report["metrics"]["worst_stretch"] <= 3.0
    assert json.loads(summary.read_text())["trees"]

    code, report = run(capsys, "verify", "--in", geometric_file, "--doc", binary)
    assert code == EXIT_OK
    assert checks(report)["tree_cover_valid"]["ok"]

    # the summary alone carries no trees to check
    code, _ = run(capsys, "verify", "--in", geometric_file, "--doc", summary)
    assert code == EXIT_USAGE


def test_oracle_build_query_bench_verify(geometric_file, tmp_path, capsys):
    oracle = tmp_path / "o.bin"
    code, report = run(capsys, "oracle", "build", "--in", geometric_file, "--eps", 1.0, "--out", oracle)
    assert code == EXIT_OK
    assert checks(report)["sandwich"]["ok"]
    assert oracle.read_bytes()[:7] == b"HWDORCL"

    answer = tmp_path / "q.json"
    code, report = run(capsys, "oracle", "query", "--in", oracle, "--out", answer, 0, 5)
    assert code == EXIT_OK
    doc = json.loads(answer.read_text())
    assert doc["input_estimate"] == pytest.approx(doc["estimate"] / doc["scale"])
    assert checks(report)["matches_tree_scan"]["ok"]

    code, report = run(capsys, "oracle", "bench", "--in", oracle, "--queries", 200)
    assert code == EXIT_OK
    assert report["document"]["count"] == 200

    code, report = run(capsys, "verify", "--in", geometric_file, "--doc", oracle)
    assert code == EXIT_OK
    assert checks(report)["oracle_sandwich"]["ok"]

    code, _ = run(capsys, "oracle", "query", "--in", oracle, 0, 99)
    assert code == EXIT_USAGE


# ==========================================================
# TSP
# ==========================================================


def test_tsp_tour_is_checked_and_verifiable(clustered_files, tmp_path, capsys):
    graph, terminals = clustered_files
    tour = tmp_path / "tour.json"
    code, report = run(capsys, "tsp", "solve", "--in", graph, "--terminals", terminals, "--q", 2, "--out", tour)
    assert code == EXIT_OK
    assert {"walk_closed", "visits_terminals", "within_guarantee"} <= set(checks(report))
    doc = json.loads(tour.read_text())
    assert doc["walk"][0] == doc["walk"][-1]
    assert doc["ratio_vs_bruteforce"] >= 1 - 1e-9

    code, report = run(capsys, "verify", "--in", graph, "--doc", tour)
    assert code == EXIT_OK

    doc["walk"] = doc["walk"][:-1]
    tour.write_text(json.dumps(doc))
    code, report = run(capsys, "verify", "--in", graph, "--doc", tour)
    assert code == EXIT_INVARIANT
    assert not checks(report)["walk_closed"]["ok"]


# ==========================================================
# ERRORS AND SCHEMAS
# ==========================================================


def test_unparsable_graph_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.gr"
    path.write_text("p sp 2 1\na 1 two 3\n")
    code, report = run(capsys, "spc", "--in", path, "--r", 1)
    assert code == EXIT_USAGE
    assert report is None


def test_missing_file_and_disconnected_graph_exit_two(tmp_path, capsys):
    assert run(capsys, "spc", "--in", tmp_path / "nope.txt", "--r", 1)[0] == EXIT_USAGE
    path = tmp_path / "split.txt"
    path.write_text("0 1 1\n2 3 1\n")
    assert run(capsys, "spc", "--in", path, "--r", 1)[0] == EXIT_USAGE


def test_out_of_range_eps_exits_two(geometric_file, capsys):
    assert run(capsys, "hierarchy", "--in", geometric_file, "--eps", 0.5)[0] == EXIT_USAGE


def test_schemas_are_written(tmp_path, capsys):
    code, report = run(capsys, "schemas", "--out", tmp_path / "schemas")
    assert code == EXIT_OK
    names = {p.name for p in (tmp_path / "schemas").iterdir()}
    assert {"spc.schema.json", "report.schema.json", "run-config.schema.json"} <= names
    cover = json.loads((tmp_path / "schemas" / "cover.schema.json").read_text())
    assert "Delta" in cover["properties"]
    assert len(report["metrics"]["schemas"]) == len(names)
