"""Command-line surface: subcommands, exit codes, byte determinism."""

import json

import pytest

from spectrace.cli import main


@pytest.fixture
def k2_file(tmp_path):
    path = tmp_path / "k2.tsv"
    path.write_text("0 1\n")
    return str(path)


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p3.tsv"
    path.write_text("0 1\n1 2\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestDescriptor:
    def test_k2_vnge_exact_is_zero(self, capsys, k2_file, tmp_path):
        out_path = tmp_path / "desc.json"
        code, _, _ = run(capsys, "descriptor", "--input", k2_file, "--kind", "vnge",
                         "--method", "exact", "--output", str(out_path))
        assert code == 0
        obj = json.loads(out_path.read_text())
        assert obj["kind"] == "vnge"
        assert abs(obj["value"]) < 1e-12
        assert obj["method"] == "exact"

    def test_netlsd_json_to_stdout(self, capsys, p3_file):
        code, out, _ = run(capsys, "descriptor", "--input", p3_file, "--kind",
                           "netlsd", "--method", "slq", "--grid-points", "8",
                           "--t-min", "0.1", "--t-max", "10")
        assert code == 0
        obj = json.loads(out)
        assert len(obj["values"]) == 8
        assert obj["seed"] == 0
        assert obj["params"]["n_v"] == 100

    def test_stdin_input(self, capsys, monkeypatch):
        import io
        monkeypatch.setattr("sys.stdin", io.StringIO("0 1\n"))
        code, out, _ = run(capsys, "descriptor", "--input", "-", "--kind", "vnge",
                           "--method", "exact")
        assert code == 0
        assert json.loads(out)["kind"] == "vnge"


class TestCompare:
    def test_same_graph_zero(self, capsys, p3_file):
        code, out, _ = run(capsys, "compare", "--a", p3_file, "--b", p3_file,
                           "--kind", "netlsd", "--method", "exact")
        assert code == 0
        assert float(out.strip()) == 0.0


class TestGenerate:
    def test_complete_graph(self, capsys, tmp_path):
        out_path = tmp_path / "k5.tsv"
        code, _, _ = run(capsys, "generate", "er", "--n", "5", "--avg-degree", "4",
                         "--seed", "1", "--output", str(out_path))
        assert code == 0
        lines = [l for l in out_path.read_text().splitlines() if l.strip()]
        assert len(lines) == 10

    def test_deterministic_bytes(self, capsys, tmp_path):
        paths = [tmp_path / "a.tsv", tmp_path / "b.tsv"]
        for p in paths:
            code, _, _ = run(capsys, "generate", "er", "--n", "50", "--avg-degree",
                             "5", "--seed", "3", "--output", str(p))
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestBenchError:
    def test_csv_output(self, capsys, p3_file, tmp_path):
        out_path = tmp_path / "err.csv"
        code, _, _ = run(capsys, "bench-error", "--inputs", p3_file, "--kind",
                         "vnge", "--methods", "slq,taylor", "--output", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0].startswith("# spectrace bench-error ")
        assert lines[1] == "graph,method,kind,rel_error,seconds"
        assert len(lines) == 4

    def test_unknown_method_is_data_error(self, capsys, p3_file):
        code, _, err = run(capsys, "bench-error", "--inputs", p3_file, "--kind",
                           "vnge", "--methods", "magic")
        assert code == 2
        assert "magic" in err


class TestSnapshots:
    def test_csv_output(self, capsys, tmp_path):
        events = tmp_path / "events.txt"
        events.write_text("0 add 0 1\n1 add 2 3\n")
        out_path = tmp_path / "snap.csv"
        code, _, _ = run(capsys, "snapshots", "--events", str(events),
                         "--granularity", "1", "--kind", "vnge", "--method",
                         "exact", "--output", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[1] == "index,distance,added,removed"
        assert lines[2] == "0,0.0,1,0"


class TestClassify:
    def test_manifest_flow(self, capsys, tmp_path):
        for name, text in [("a0.tsv", "0 1\n"), ("a1.tsv", "0 1\n1 2\n0 2\n"),
                           ("b0.tsv", "0 1\n1 2\n"), ("b1.tsv", "0 1\n1 2\n2 3\n")]:
            (tmp_path / name).write_text(text)
        manifest = tmp_path / "data.csv"
        manifest.write_text("a0.tsv,a\na1.tsv,a\nb0.tsv,b\nb1.tsv,b\n")
        out_path = tmp_path / "acc.csv"
        code, _, _ = run(capsys, "classify", "--manifest", str(manifest), "--kind",
                         "vnge", "--method", "exact", "--repeats", "50",
                         "--output", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[1] == "dataset,kind,method,mean_acc,std,repeats"
        assert lines[2].startswith("data,vnge,exact,")


class TestExitCodes:
    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["--help"])
        assert exc_info.value.code == 0
        assert "descriptor" in capsys.readouterr().out

    def test_subcommand_help_lists_defaults(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["descriptor", "--help"])
        assert exc_info.value.code == 0
        out = capsys.readouterr().out
        for flag in ("--nv", "--steps", "--seed", "--t-min", "--t-max",
                     "--grid-points", "--k", "--threads"):
            assert flag in out
        assert "default: 100" in out  # n_v
        assert "default: 256" in out  # grid points

    def test_unknown_flag_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["descriptor", "--nope"])
        assert exc_info.value.code == 1

    def test_missing_subcommand_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main([])
        assert exc_info.value.code == 1

    def test_missing_file_is_data_error(self, capsys):
        code, _, err = run(capsys, "descriptor", "--input", "/nonexistent/x.tsv",
                           "--kind", "vnge", "--method", "exact")
        assert code == 2
        assert "error" in err

    def test_malformed_input_is_data_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("0 1 2 3 4\n")
        code, _, err = run(capsys, "descriptor", "--input", str(bad), "--kind",
                           "vnge", "--method", "exact")
        assert code == 2
        assert "line 1" in err


class TestByteDeterminism:
    def test_descriptor_runs_identical_across_threads(self, capsys, p3_file, tmp_path):
        outputs = []
        for i, threads in enumerate(("1", "4")):
            out_path = tmp_path / f"d{i}.json"
            code, _, _ = run(capsys, "descriptor", "--input", p3_file, "--kind",
                             "netlsd", "--method", "slq", "--grid-points", "16",
                             "--threads", threads, "--output", str(out_path))
            assert code == 0
            outputs.append(out_path.read_bytes())
        assert outputs[0] == outputs[1]
