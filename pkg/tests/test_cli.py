import pytest

from selfadj.cli import main


@pytest.fixture
def sorting_trace(tmp_path):
    p = tmp_path / "s.trace"
    assert main(["gen", "--sorting", "--n", "64", "--seed", "2", "--out", str(p)]) == 0
    return p


def test_verify_sorting_trace(sorting_trace, capsys):
    assert main(["verify", str(sorting_trace)]) == 0
    out = capsys.readouterr().out
    lemma = [ln for ln in out.splitlines() if ln.startswith("LEMMA")]
    assert lemma and all(" PASS " in ln for ln in lemma)


def test_verify_detects_failure(tmp_path, capsys, monkeypatch):
    p = tmp_path / "t.trace"
    main(["gen", "--n", "300", "--seed", "5", "--out", str(p)])
    import selfadj.cli as cli
    monkeypatch.setattr(cli, "outputs_match", lambda *a, **k: False)
    assert main(["verify", str(p), "--variant", "slim", "--mode", "eager"]) == 1
    assert "ORACLE slim eager FAIL" in capsys.readouterr().out


def test_replay_variants_agree(tmp_path, capsys):
    p = tmp_path / "t.trace"
    main(["gen", "--n", "500", "--mix", "5:3:2", "--heaps", "2", "--seed", "1", "--out", str(p)])
    outs = []
    for args in (["--variant", "smooth", "--mode", "lazy"], ["--variant", "slim"]):
        capsys.readouterr()
        assert main(["replay", str(p)] + args) == 0
        outs.append([ln for ln in capsys.readouterr().out.splitlines() if ln.startswith("out ")])
    assert outs[0] == outs[1] and outs[0]


def test_replay_writes_csv(sorting_trace, tmp_path):
    out = tmp_path / "m.csv"
    assert main(["replay", str(sorting_trace), "--out", str(out)]) == 0
    assert out.read_text().startswith("op,n_bin,count,mean_links,mean_cmps\n")


def test_dijkstra_check(tmp_path, capsys):
    g = tmp_path / "g.gr"
    g.write_text("p sp 4 3\na 1 2 1\na 2 3 1\na 1 3 5\n")
    assert main(["dijkstra", str(g), "--check", "--variant", "multipass"]) == 0
    assert capsys.readouterr().out == "1 0\n2 1\n3 2\n4 INF\n"


def test_usage_errors(tmp_path, capsys):
    assert main([]) == 2
    assert main(["replay", str(tmp_path / "missing.trace")]) == 2
    bad = tmp_path / "bad.trace"
    bad.write_text("H\nD 0\n")
    assert main(["replay", str(bad)]) == 2
    gr = tmp_path / "bad.gr"
    gr.write_text("p sp 2 1\na 3 1 1\n")
    assert main(["dijkstra", str(gr)]) == 2
    assert main(["bench", "--n", "16", "--n-min", "16"]) == 2
    assert main(["gen", "--mix", "1:x:2"]) == 2
    assert "error" in capsys.readouterr().err


def test_bench_outputs(tmp_path, capsys):
    out = tmp_path / "b.csv"
    args = ["bench", "--n", "64", "--n-min", "16", "--repeats", "2", "--variant", "smooth",
            "--mix", "1:1:8", "--seed", "7", "--out", str(out)]
    assert main(args) == 0
    first = (out.read_text(), (tmp_path / "b_fits.csv").read_text())
    assert main(args) == 0
    assert first == (out.read_text(), (tmp_path / "b_fits.csv").read_text())
    assert (tmp_path / "b_decrease_key.csv").exists()
    assert "coefficient" in first[1]
