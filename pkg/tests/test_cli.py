import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricmld.cli import main
from toricmld.pairfile import InvalidPair, PairFile, ParseError, read_pair_file
from toricmld.verify import GenConfig, gen_pairs

A1 = "name A1\nrank 2\nray 1 0\nray 1 2\ncone 0 1\nboundary 0 0\n"


def run(capsys, *argv):
    status = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return status, out, err


@pytest.fixture
def a1_file(tmp_path):
    path = tmp_path / "a1.pair"
    path.write_text(A1)
    return path


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_parse_a1():
    pf = PairFile.parse("# comment\n" + A1)
    assert pf.rays == ((1, 0), (1, 2)) and pf.cones == ((0, 1),)
    assert pf.to_text() == A1


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("rank 2\nray 2 4\ncone 0\nboundary 0\n", "ray 0 [2, 4] is not primitive"),
        ("rank 2\nray 1 0\nray 1 0\ncone 0 1\nboundary 0 0\n", "duplicates"),
        ("rank 2\nray 1 0\ncone 0 3\nboundary 0\n", "unknown ray 3"),
        ("rank 2\nray 1 0\nray 0 1\ncone 0\nboundary 0 0\n", "ray 1 is not used"),
        ("rank 2\nray 1 0\ncone 0\nboundary 0 0\n", "boundary coefficients"),
        ("rank 2\nray 1 0\ncone 0\nboundary 0.5\n", "not an exact rational"),
        ("rank 2\nray 1 0 0\ncone 0\nboundary 0\n", "3 coordinates"),
        ("ray 1 0\n", "ray before rank"),
        ("rank 2\nfoo 1\n", "unknown record"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError, match=fragment.replace("[", r"\[").replace("]", r"\]")):
        PairFile.parse(text)


def test_invalid_pairs():
    with pytest.raises(InvalidPair, match="not an extreme ray"):
        PairFile.parse("rank 2\nray 1 0\nray 1 1\nray 0 1\ncone 0 1 2\nboundary 0 0 0\n").to_fan()
    with pytest.raises(InvalidPair, match="common face"):
        PairFile.parse("rank 2\nray 1 0\nray 1 2\nray 0 1\ncone 0 1\ncone 0 2\nboundary 0 0 0\n").to_fan()


@given(st.integers(0, 2**32), st.integers(2, 4))
@settings(max_examples=20)
def test_round_trip(seed, rank):
    for p in gen_pairs(GenConfig(rank=rank, seed=seed, count=2)):
        text = PairFile.from_pair(p, "x").to_text()
        pf = PairFile.parse(text)
        assert pf.to_text() == text
        assert PairFile.from_pair(pf.to_pair(), "x") == pf


def test_mld_table(capsys, a1_file):
    status, out, _ = run(capsys, "mld", a1_file, "--all")
    assert status == 0
    assert "[0,1]  2    1          1          [1, 1]" in out


def test_mld_json_is_stable(capsys, a1_file):
    _, first, _ = run(capsys, "mld", a1_file, "--json")
    _, second, _ = run(capsys, "mld", a1_file, "--json")
    assert first == second
    doc = json.loads(first)
    assert list(doc)[:3] == ["tool", "version", "input_digest"]
    top = doc["cones"][-1]
    assert top["rays"] == [0, 1] and top["orbit_mld"] == "1" and top["index"] == 2


def test_quotient_cone_selector(capsys, tmp_path):
    f = write(tmp_path, "q.pair", "rank 3\nray 1 0 0\nray 0 1 0\nray -1 -1 2\ncone 0 1 2\nboundary 0 0 0\n")
    status, out, _ = run(capsys, "mld", f, "--cone", "2,0,1")
    assert status == 0 and "3/2" in out and "[0, 0, 1]" in out
    assert run(capsys, "mld", f, "--cone", "0,9")[0] == 2


def test_exit_codes(capsys, tmp_path):
    bad = write(tmp_path, "bad.pair", "rank 2\nray 1 0\nray 2 4\ncone 0 1\nboundary 0 0\n")
    status, _, err = run(capsys, "mld", bad)
    assert status == 2 and "ray 1" in err
    overlap = write(tmp_path, "o.pair", "rank 2\nray 1 0\nray 1 2\nray 0 1\ncone 0 1\ncone 0 2\nboundary 0 0 0\n")
    status, _, err = run(capsys, "mld", overlap)
    assert status == 3 and "[0,1]" in err and "[0,2]" in err
    sq = "rank 3\nray 1 0 1\nray 0 1 1\nray -1 0 1\nray 0 -1 1\ncone 0 1 2 3\nboundary 0 0 0 1\n"
    status, _, err = run(capsys, "classify", write(tmp_path, "s.pair", sq))
    assert status == 3 and "R-Cartier" in err and "[0,1,2,3]" in err
    status, _, err = run(capsys, "spectrum", write(tmp_path, "r.pair", "rank 1\nray 1\ncone 0\nboundary 2\n"))
    assert status == 3 and "ray 0" in err
    assert run(capsys, "mld", tmp_path / "missing.pair")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["mld"])
    assert e.value.code == 2


def test_spectrum_stratify_classify(capsys, a1_file):
    assert run(capsys, "spectrum", a1_file)[1] == "spectrum: 1, 2\n"
    assert json.loads(run(capsys, "spectrum", a1_file, "--json")[1])["spectrum"] == ["1", "2"]
    assert run(capsys, "stratify", a1_file)[1] == "1: [0,1]\n2: [] [0] [1]\n"
    out = run(capsys, "classify", a1_file)[1]
    assert "canonical: yes" in out and "terminal: no" in out


def test_smooth_and_resolve(capsys, a1_file, tmp_path):
    doc = json.loads(run(capsys, "smooth", a1_file, "--json")[1])
    top = doc["cones"][-1]
    assert not doc["smooth"] and top["index"] == 2 and top["box_points"] == 2
    out = tmp_path / "r.pair"
    assert run(capsys, "resolve", a1_file, "-o", out)[0] == 0
    pf = read_pair_file(out)
    assert (1, 1) in pf.rays and len(pf.cones) == 2
    assert json.loads(run(capsys, "smooth", out, "--json")[1])["smooth"]


def test_resolve_smooth_input_is_canonical_copy(capsys, tmp_path):
    src = write(tmp_path, "s.pair", "name s\nrank 2\nray 0 1\nray 1 0\ncone 1 0\nboundary 1/2 0\n")
    out = tmp_path / "o.pair"
    run(capsys, "resolve", src, "-o", out)
    assert out.read_text() == "name s\nrank 2\nray 0 1\nray 1 0\ncone 0 1\nboundary 1/2 0\n"


def test_resolve_crepant_negative_boundary(capsys, tmp_path):
    f = write(tmp_path, "q.pair", "rank 3\nray 1 0 0\nray 0 1 0\nray -1 -1 2\ncone 0 1 2\nboundary 0 0 0\n")
    out = tmp_path / "r.pair"
    status, _, err = run(capsys, "resolve", f, "-o", out)
    assert status == 0 and "outside [0, 1]" in err
    pf = read_pair_file(out)
    assert pf.boundary[pf.rays.index((0, 0, 1))] == Fraction(-1, 2)
    assert json.loads(run(capsys, "smooth", out, "--json")[1])["smooth"]


def test_witness(capsys, tmp_path, a1_file):
    f = write(tmp_path, "q.pair", "rank 3\nray 1 0 0\nray 0 1 0\nray -1 -1 2\ncone 0 1 2\nboundary 0 0 0\n")
    out = tmp_path / "w.pair"
    status, text, _ = run(capsys, "witness", f, "--cone", "0,1,2", "-o", out)
    assert status == 0 and "new ray [0, 0, 1]  a = 3/2  (equals mld_orbit)" in text
    assert (0, 0, 1) in read_pair_file(out).rays
    status, text, err = run(capsys, "witness", a1_file, "--cone", "0")
    assert status == 0 and "no subdivision" in err


def test_product(capsys, tmp_path, a1_file):
    out = tmp_path / "p.pair"
    assert run(capsys, "product", a1_file, a1_file, "-o", out)[0] == 0
    doc = json.loads(run(capsys, "mld", out, "--json")[1])
    assert doc["rank"] == 4 and doc["cones"][-1]["orbit_mld"] == "2"
    point = write(tmp_path, "pt.pair", "rank 1\nboundary\n")
    out2 = tmp_path / "p2.pair"
    run(capsys, "product", a1_file, point, "-o", out2)
    assert json.loads(run(capsys, "spectrum", out2, "--json")[1])["spectrum"] == ["2", "3"]


def test_product_rank_warning(capsys, tmp_path):
    big = write(tmp_path, "b.pair", "rank 4\nray 1 0 0 0\ncone 0\nboundary 0\n")
    status, _, err = run(capsys, "product", big, big, "-o", tmp_path / "o.pair")
    assert status == 0 and "rank 8" in err


def test_verify(capsys, tmp_path, a1_file):
    status, out, _ = run(capsys, "verify", "--random", "--rank", 3, "--count", 50, "--seed", 7, "--props", "lsc,bound")
    assert status == 0 and "seed 7" in out and "50 instances" in out and "PCG64" in out
    status, out, _ = run(capsys, "verify", "--file", a1_file, a1_file, "--props", "product")
    assert status == 0
    assert run(capsys, "verify", "--random", "--props", "lsc,,bound")[0] == 2
    assert run(capsys, "verify", "--random", "--props", "nope")[0] == 2
    status, out, _ = run(capsys, "verify", "--file", a1_file, "--props", "bound-literal", "--json")
    doc = json.loads(out)
    assert status == 1 and not doc["passed"]
    (v,) = doc["properties"]["bound-literal"]["violations"]
    assert PairFile.parse(v["pair"]).rays == ((1, 0), (1, 2))


def test_verify_deterministic(capsys):
    argv = ("verify", "--random", "--rank", 2, "--count", 10, "--seed", 3, "--json")
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_tabs_and_comments():
    pf = PairFile.parse("# c\n\nname\tt x\nrank\t2\nray 1\t0\n  cone 0\nboundary\t1/2\n")
    assert pf.name == "t x" and pf.rays == ((1, 0),) and pf.boundary == (Fraction(1, 2),)
