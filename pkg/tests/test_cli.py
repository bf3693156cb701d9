import io
import subprocess
import sys

import pytest

from stratos import cli
from stratos.catalog import make
from stratos.complex import perversity, validate
from stratos.signatures import WallReport
from stratos.ssp import (PerversityFileError, SspContentError, SspParseError, emit_perversity, emit_ssp, parse_perversity,
                         parse_ssp, resolve_perversity)

S2 = """# minimal sphere
dim 2
facet 1 2 3 orient 1
facet 0 2 3 orient -1
facet 0 1 3 orient 1
facet 0 1 2 orient -1
"""


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_minimal_sphere_file():
    X = parse_ssp(S2)
    assert X.note == "minimal sphere" and X.dim == 2 and len(X.facets) == 4
    assert validate(X).ok


@pytest.mark.parametrize("spec", ["sphere 3", "torus2", "cp2", "suspend torus3", "glue cone(s3) cone(s3)",
                                  "star-split cp2", "cylinder-split disk(3)", "cone-off-boundary solid-torus",
                                  "circle-split suspend(t2)", "solid-torus", "double cone(t2)"])
def test_round_trip_is_byte_identical(spec, tmp_path):
    code, text, _ = run("make", *spec.split())
    assert code == 0
    X = parse_ssp(text)
    assert emit_ssp(X) == text
    Y = make(spec)
    assert X.orientation == Y.orientation and X.singular_levels() == Y.singular_levels()
    assert X.boundary == Y.boundary and X.parts == Y.parts
    assert X.collar == Y.collar and X.bicollar == Y.bicollar


def test_make_examples():
    code, text, _ = run("make", "sphere", "3")
    X = parse_ssp(text)
    assert code == 0 and X.complex.f_vector()[0] == 5 and len(X.facets) == 5
    _, text, _ = run("make", "suspend", "torus3")
    assert len(parse_ssp(text).strata) == 2
    _, text, _ = run("make", "glue", "cone(s3)", "cone(s3)")
    assert "bicollar" in text and "part 2" in text


def test_make_unknown_example():
    code, _, err = run("make", "klein-bottle")
    assert code == 1 and "known examples" in err


def test_make_from_file(tmp_path):
    f = tmp_path / "s2.ssp"
    f.write_text(S2)
    code, text, _ = run("make", "suspend", str(f))
    assert code == 0 and len(parse_ssp(text).strata) == 2


@pytest.mark.parametrize("text,line", [
    ("dim 2\nfacet 0 1 orient 1\n", 2),
    ("facet 0 1 2 orient 1\n", 1),
    ("dim 2\nfacet 0 1 2 orient 2\n", 2),
    ("dim 2\nfacet 0 1 2 orient 1\nfacet 2 1 0 orient 1\n", 3),
    ("dim 2\nfacet 0 1 2 orient 1\nwibble 3\n", 3),
    ("dim 2\nfacet 0 1 2 orient 1\nskeleton 0 0 1\n", 3),
])
def test_parse_errors_have_line_numbers(text, line):
    with pytest.raises(SspParseError) as e:
        parse_ssp(text)
    assert e.value.line == line


def test_skeleton_outside_complex_names_missing_face():
    bad = S2 + "skeleton 1 0 7\n"
    with pytest.raises(SspContentError, match=r"\[7\]"):
        parse_ssp(bad)


def test_unclosed_facets_name_the_face(tmp_path):
    f = tmp_path / "open.ssp"
    f.write_text("\n".join(S2.splitlines()[:-1]) + "\n")
    code, _, err = run("homology", str(f))
    assert code == 1 and "non_branching" in err
    # the dropped facet is 0 1 2; one of its edges is now a free face
    assert any(f"at {e}" in err for e in ("[0, 1]", "[0, 2]", "[1, 2]"))


def test_perversity_file_forms(tmp_path):
    X = make("suspend torus2")
    assert parse_perversity("top\n", X) == perversity(X, "top")
    p = parse_perversity("# values\nstratum 0 1\nstratum 1 0\n", X)
    assert p.values == (1, 0)
    assert parse_perversity(emit_perversity(p, X), X) == p
    with pytest.raises(PerversityFileError, match="stratum ids 0, 1"):
        parse_perversity("stratum 0 1\nstratum 9 0\n", X)
    with pytest.raises(PerversityFileError, match="1"):
        parse_perversity("stratum 0 1\n", X)
    with pytest.raises(SspParseError):
        parse_perversity("middle\n", X)
    assert resolve_perversity("-1", X).values == (-1, -1)
    with pytest.raises(PerversityFileError):
        resolve_perversity(str(tmp_path / "none.perv"), X)


def test_cli_unknown_stratum_lists_ids(tmp_path):
    f = tmp_path / "x.ssp"
    f.write_text(emit_ssp(make("suspend torus2")))
    pv = tmp_path / "p.perv"
    pv.write_text("stratum 4 0\n")
    code, _, err = run("ih", str(f), "--p", str(pv))
    assert code == 1 and "stratum ids 0, 1" in err


def test_signature_cp2(tmp_path):
    f = tmp_path / "cp2.ssp"
    f.write_text(emit_ssp(make("cp2")))
    code, out, _ = run("signature", "--p", "zero", "--q", "top", str(f))
    assert code == 0 and "sigma = 1\n" in out and "[pairing]\n" in out


def test_signature_wrong_dimension(tmp_path):
    f = tmp_path / "t.ssp"
    f.write_text(emit_ssp(make("torus2")))
    assert run("signature", str(f))[0] == 1


def test_maslov_files(tmp_path):
    (tmp_path / "F.mat").write_text("2 2\n0 1\n-1 0\n")
    (tmp_path / "A.mat").write_text("2 1\n1\n0\n")
    (tmp_path / "B.mat").write_text("2 1\n0\n1\n")
    (tmp_path / "C.mat").write_text("2 1\n1\n1\n")
    (tmp_path / "D.mat").write_text("2 1\n1\n-1\n")
    paths = [str(tmp_path / n) for n in ("F.mat", "A.mat", "B.mat", "C.mat")]
    code, out, _ = run("maslov", *paths)
    assert code == 0 and "index = 1\n" in out
    code, out, _ = run("maslov", *paths[:3], str(tmp_path / "D.mat"))
    assert "index = -1\n" in out
    (tmp_path / "bad.mat").write_text("2 2\n0 1\n")
    assert run("maslov", str(tmp_path / "bad.mat"), *paths[1:])[0] == 3
    (tmp_path / "sym.mat").write_text("2 2\n1 0\n0 1\n")
    assert run("maslov", str(tmp_path / "sym.mat"), *paths[1:])[0] == 1


def test_wall_verify_s4(tmp_path):
    f = tmp_path / "s4-split.ssp"
    f.write_text(emit_ssp(make("glue cone(s3) cone(s3)")))
    code, out, _ = run("wall-verify", str(f))
    assert code == 0 and "residual = 0\n" in out and "dims_consistent = yes\n" in out


def test_wall_verify_exit_two_on_residual(tmp_path, monkeypatch):
    f = tmp_path / "s4-split.ssp"
    f.write_text(emit_ssp(make("glue cone(s3) cone(s3)")))
    fake = WallReport(1, 0, 0, 0, {"V": 0, "A": 0, "B": 0, "C": 0, "W": 0}, 0, 0)
    monkeypatch.setattr(cli, "verify_wall", lambda *a, **k: fake)
    code, out, _ = run("wall-verify", str(f))
    assert code == 2 and "residual = 1\n" in out


def test_wall_verify_needs_parts(tmp_path):
    f = tmp_path / "s4.ssp"
    f.write_text(emit_ssp(make("sphere 4")))
    assert run("wall-verify", str(f))[0] == 1


def test_parse_failure_exit_three(tmp_path):
    f = tmp_path / "junk.ssp"
    f.write_text("dim two\n")
    code, _, err = run("info", str(f))
    assert code == 3 and ":1:" in err
    assert run("info", str(tmp_path / "missing.ssp"))[0] == 3


def test_usage_errors_exit_one():
    assert run("ih")[0] == 1
    assert run("frobnicate")[0] == 1


def test_reports_are_deterministic(tmp_path):
    f = tmp_path / "x.ssp"
    f.write_text(emit_ssp(make("star-split cp2")))
    a = run("wall-verify", str(f), "--report", str(tmp_path / "r.txt"))
    b = run("wall-verify", str(f))
    assert a == b and a[0] == 0
    assert (tmp_path / "r.txt").read_text() == a[1]
    c = run("info", str(f))
    assert c == run("info", str(f))


def test_subdivide_option(tmp_path):
    f = tmp_path / "t.ssp"
    f.write_text(emit_ssp(make("torus2")))
    code, out, _ = run("homology", str(f), "--subdivide", "1")
    assert code == 0 and "betti = 1 2 1\n" in out


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "stratos.cli", "make", "sphere", "2"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and res.stdout.startswith("# sphere 2\ndim 2\n")
