import pytest

from procsplit.cli import main
from procsplit.semantics import from_aut
from procsplit.syntax import parse


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_check(files, capsys):
    assert main(["check", files("p.proc", "P = a . P;")]) == 0
    assert "root P" in capsys.readouterr().out


def test_check_reports_errors(files, capsys):
    assert main(["check", files("p.proc", "P = a . ;")]) == 2
    assert "1:9" in capsys.readouterr().err
    assert main(["check", files("q.proc", "P = Q; Q = P;")]) == 2
    assert main(["check", "/nonexistent/file"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["split"])
    assert info.value.code == 2


def test_lts_and_aut(files, tmp_path, capsys):
    out = tmp_path / "fifo.aut"
    assert main(["lts", files("f.proc", "Fifo = a . b . Fifo;"), "--aut", str(out)]) == 0
    assert "states: 2" in capsys.readouterr().out
    assert out.read_text() == 'des (0,2,2)\n(0,"a",1)\n(1,"b",0)\n-- term:\n'
    assert from_aut(out.read_text()).num_states == 2


def test_lts_state_bound(files):
    assert main(["lts", files("p.proc", "P = a . (P || b);"), "--max-states", "20"]) == 2


def test_lts_unknown_proc(files):
    assert main(["lts", files("p.proc", "P = a;"), "--proc", "Q"]) == 2


def test_bisim(files, capsys):
    a = files("a.proc", "P = a . (b + c);")
    b = files("b.proc", "P = a . (c + b) + a . (b + c);")
    c = files("c.proc", "P = a . b + a . c;")
    assert main(["bisim", a, b]) == 0
    assert main(["bisim", a, c]) == 1
    out = capsys.readouterr().out
    assert "not bisimilar" in out and "witness: a -> " in out


def test_bisim_with_aut(files, tmp_path):
    spec = files("f.proc", "Fifo = a . b . Fifo;\nOther = a . b . a . b . Other;")
    aut = str(tmp_path / "f.aut")
    assert main(["lts", spec, "--aut", aut]) == 0
    assert main(["bisim", aut, spec, "--proc-b", "Other"]) == 0


def test_split_verify(files, tmp_path, capsys):
    out = tmp_path / "split.proc"
    src = files("f.proc", "Fifo = a . b . Fifo;")
    assert main(["split", src, "--actions", "a", "--verify", "-o", str(out)]) == 0
    assert "bisimilar" in capsys.readouterr().out
    spec = parse(out.read_text())
    assert spec.root == "Fifo#split#a#"


def test_split_negative_control(files, capsys):
    src = files("r.proc", "R = a . b + a . c;")
    assert main(["split", src, "--actions", "a", "--frozen-word", "--verify", "-o",
                 files("o.proc", "")]) == 1
    out = capsys.readouterr().out
    assert "not bisimilar" in out and "witness: a -> {b} vs {}" in out


def test_split_without_verify_prints(files, capsys):
    assert main(["split", files("s.proc", "Sync = a|b . Sync;"), "--actions", "a",
                 "--word", "12"]) == 0
    assert "`a#f#12`" in capsys.readouterr().out


def test_split_bad_word(files):
    assert main(["split", files("s.proc", "S = a;"), "--actions", "a", "--word", "3"]) == 2


def test_regions(files, capsys):
    assert main(["regions", files("p.proc", "P = a|b . c + d;")]) == 0
    assert capsys.readouterr().out.splitlines() == ["a,b,d", "c"]


def test_regions_with_topology(files, capsys):
    topo = files("chain.topo", "sync a -> x\nfifo x -> y\nsync y -> b\nboundary a, b\n")
    composed = files("chain.proc", "")
    assert main(["reo", topo, "-o", composed]) == 0
    assert main(["regions", composed, "--topo", topo]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["a,x", "b,y", "x -- y"]


def test_reo_bad_topology(files):
    assert main(["reo", files("bad.topo", "fifo a -> x\n")]) == 2


def test_axioms(capsys):
    assert main(["axioms", "--seed", "1", "--per-axiom", "3"]) == 0
    out = capsys.readouterr().out
    assert "SMA" in out and "FAIL" not in out
