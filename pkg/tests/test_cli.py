import filecmp

import pytest

from rwspn.cli import main


def test_explore_quotient_counts(tmp_path, capsys):
    out = tmp_path / "q"
    assert main(["explore", "--n", "1", "--mode", "quotient", "--out", str(out)]) == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("states=42 final=2 elapsed=")
    for name in ("states.txt", "edges.txt", "generator.coo"):
        assert (out / name).exists()


def test_explore_ordinary_counts(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["explore", "--n", "1", "--mode", "ordinary", "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith("states=60 final=2")


def test_explore_budget_exceeded(tmp_path, capsys):
    out = tmp_path / "b"
    rc = main(["explore", "--n", "2", "--budget", "40", "--out", str(out)])
    assert rc != 0


def test_explore_determinism_across_workers(tmp_path):
    outs = []
    for w in ("1", "8"):
        out = tmp_path / f"w{w}"
        assert main(["explore", "--n", "1", "--workers", w, "--out", str(out)]) == 0
        outs.append(out)
    for name in ("states.txt", "edges.txt", "generator.coo"):
        assert filecmp.cmp(outs[0] / name, outs[1] / name, shallow=False)


def test_explore_verify_symmetry(tmp_path):
    out = tmp_path / "vs"
    assert main(["explore", "--n", "1", "--verify-symmetry", "--out", str(out)]) == 0


def test_verify_passes(capsys):
    assert main(["verify", "--n", "1"]) == 0
    out = capsys.readouterr().out
    assert "normalize-oracle: PASS" in out
    assert "strong-lumpability: PASS" in out
    assert "lumped-vs-quotient: PASS" in out


def test_verify_perturbed_fails(capsys):
    assert main(["verify", "--n", "1", "--perturb"]) != 0
    assert "strong-lumpability: FAIL" in capsys.readouterr().out


def test_solve_writes_measures(tmp_path, capsys):
    out = tmp_path / "s"
    assert main(["solve", "--n", "1", "--grid", "1:1000:12", "--out", str(out)]) == 0
    csv = (out / "measures.csv").read_text().splitlines()
    assert csv[0] == "t,throughput,reliability,conditional"
    assert len(csv) == 13
    rel = [float(row.split(",")[2]) for row in csv[1:]]
    assert rel == sorted(rel, reverse=True)
    assert (out / "generator.coo").exists()


def test_solve_rejects_bad_grid(tmp_path):
    with pytest.raises(SystemExit):
        main(["solve", "--n", "1", "--grid", "10:1:5", "--out", str(tmp_path)])


def test_export_net(tmp_path, capsys):
    out = tmp_path / "n"
    assert main(["export-net", "--n", "2", "--out", str(out)]) == 0
    text = (out / "net.txt").read_text()
    assert '|-> << "ld", 0, 0.5 >>' in text
    assert "\n\n" in text  # net, blank line, marking
    assert '4 . p(< "s" ; 0 >)' in text


def test_generator_coo_format(tmp_path):
    out = tmp_path / "g"
    main(["explore", "--n", "1", "--out", str(out)])
    lines = (out / "generator.coo").read_text().splitlines()
    assert lines[0] == "42"
    i, j, q = lines[1].split(" ")
    int(i), int(j), float(q)
