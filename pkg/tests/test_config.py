import textwrap

import pytest

from fcatreal.config import (
    SHIPPED,
    ConfigNotFound,
    ConfigSyntaxError,
    ConfigValueError,
    ShapeError,
    UnresolvedName,
    parse_config,
)
from fcatreal.fcat import gr
from fcatreal.tstruct import heart_contains

from conftest import P1, S1, S2

HEAD = textwrap.dedent("""\
    name = "scratch"
    probes = ["S1"]

    [quiver]
    vertices = ["1", "2"]
    arrows = [["a", "1", "2"]]
    """)


def write(tmp_path, body: str, top: str = ""):
    p = tmp_path / "c.toml"
    p.write_text(top + HEAD + textwrap.dedent(body))
    return p


def same_rep(a, b) -> bool:
    """Equal dims and arrow matrices, ignoring how the arrows are labelled."""
    return a.dims == b.dims and [a.arrow_map(l) for l, _, _ in a.quiver.arrows] == [
        b.arrow_map(l) for l, _, _ in b.quiver.arrows]


def same_stalk(x, m) -> bool:
    return x.lo == x.hi == 0 and same_rep(x.term(0), m)


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_configs_parse(name):
    cfg = parse_config(name)
    assert cfg.name == name
    for _, m in cfg.probes:
        assert heart_contains(m, cfg.tstructure)[0]


def test_tilt_pos_contents():
    cfg = parse_config("a2_tilt_pos")
    assert cfg.quiver_name == "Q_A2"
    assert cfg.quiver.vertices == ("1", "2")
    assert cfg.tstructure.label() == "TILT_POS"
    assert same_rep(cfg.reps["P1"], P1)
    assert [n for n, _ in cfg.probes] == ["S1", "P1", "S2[1]"]
    s21 = cfg.probes[2][1]
    assert s21.lo == s21.hi == -1 and same_rep(s21.term(-1), S2)
    assert [n for n, _ in cfg.generators] == ["S1", "S2", "P1"]


def test_unresolved_torsion_generator(tmp_path):
    p = write(tmp_path, """
        [torsion]
        generators = ["S9"]
        """)
    with pytest.raises(UnresolvedName, match=r"^unresolved name S9 at torsion\.generators\[0\]$"):
        parse_config(p)


def test_bad_matrix_shape_names_arrow(tmp_path):
    p = write(tmp_path, """
        [reps.M]
        dims = [2, 2]
        maps = { a = [[1, 0, 0], [0, 1, 0]] }
        """)
    with pytest.raises(ShapeError, match=r"arrow a .*2x3, expected 2x2"):
        parse_config(p)


def test_missing_file():
    with pytest.raises(ConfigNotFound, match="config not found"):
        parse_config("/nonexistent/instance.toml")


def test_syntax_error(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("name = \n[quiver")
    with pytest.raises(ConfigSyntaxError):
        parse_config(p)


def test_error_kinds_are_distinct():
    kinds = {ConfigNotFound, ConfigSyntaxError, UnresolvedName, ShapeError}
    assert len(kinds) == 4
    for a in kinds:
        for b in kinds - {a}:
            assert not issubclass(a, b)


def test_rationals_and_object_expressions(tmp_path):
    p = write(tmp_path, """
        [reps.M]
        dims = { "1" = 1, "2" = 1 }
        maps = { a = [["3/2"]] }
        """, top='generators = ["M + S2[1]", "0"]\n')
    cfg = parse_config(p)
    m = cfg.reps["M"]
    assert str(m.arrow_map("a")[0, 0]) == "3/2"
    g = cfg.generators[0][1]
    assert g.term(0) == m and same_rep(g.term(-1), S2)
    assert cfg.generators[1][1].is_zero()


def test_unknown_probe_name(tmp_path):
    p = write(tmp_path, "")
    p.write_text(p.read_text().replace('probes = ["S1"]', 'probes = ["S1", "Q7[1]"]'))
    with pytest.raises(UnresolvedName, match=r"unresolved name Q7 at probes\[1\]"):
        parse_config(p)


def test_tilt_needs_torsion(tmp_path):
    p = write(tmp_path, """
        [tstructure]
        kind = "tilt"
        """)
    with pytest.raises(ConfigValueError, match="torsion"):
        parse_config(p)


def test_heart_complex_literal(tmp_path):
    p = write(tmp_path, """
        [torsion]
        name = "T"
        generators = ["S1", "P1"]

        [tstructure]
        kind = "tilt"

        [[realize]]
        name = "phi"
        terms = [{ degree = 0, object = "S1" }, { degree = 1, object = "S2[1]" }]
        diffs = [{ degree = 0, coeffs = ["2/3"] }]
        expect = "P1"
        """)
    cfg = parse_config(p)
    case = cfg.realize[0]
    assert not case.complex.diff(0).is_zero()
    assert same_stalk(case.expect_object, P1)


def test_heart_complex_literal_wrong_coeff_count(tmp_path):
    p = write(tmp_path, """
        [[realize]]
        terms = [{ degree = 0, object = "S1" }, { degree = 1, object = "S1" }]
        diffs = [{ degree = 0, coeffs = [1, 1] }]
        """)
    with pytest.raises(ShapeError, match="coeffs"):
        parse_config(p)


def test_filtered_literal():
    cfg = parse_config("a2_standard")
    name, x = cfg.filtered[0]
    assert same_stalk(gr(x, 0), S1) and same_stalk(gr(x, 1), S2)


def test_subcats_and_functoriality_cases():
    cfg = parse_config("a3_subcat")
    assert set(cfg.subcats) == {"V23", "V2", "T2"}
    assert cfg.subcats["T2"].kind == "thick-generated"
    assert all(c.subcat in cfg.subcats for c in cfg.functoriality)


def test_top_level_key_after_table_is_caught(tmp_path):
    # TOML files a key written after [quiver] under that table
    p = write(tmp_path, 'generators = ["S1"]\n')
    with pytest.raises(ConfigValueError, match="unknown key generators at quiver"):
        parse_config(p)


def test_unknown_subcat_reference(tmp_path):
    p = write(tmp_path, """
        [[functoriality]]
        subcat = "nowhere"
        terms = [{ degree = 0, object = "S2" }]
        """)
    with pytest.raises(UnresolvedName, match="nowhere"):
        parse_config(p)


def test_filtered_span_errors(tmp_path):
    body = """
        [[filtered]]
        a = 0
        terms = [{ degree = 0, object = "P1" }]
        spans = [%s]
        """
    bad = {
        '{ p = 1, degree = 0, vertex = "7", basis = [[1]] }': (UnresolvedName, "unresolved name 7"),
        '{ p = 0, degree = 0, vertex = "2", basis = [[1]] }': (ConfigValueError, "must exceed"),
        '{ p = 1, degree = 0, basis = [[1]] }': (ConfigValueError, "missing key vertex"),
        '{ p = 1, degree = 3, vertex = "2", basis = [[1]] }': (ConfigValueError, "not a term"),
        '{ p = 1, degree = 0, vertex = "2", basis = [[1], [0]] }': (ShapeError, "2x1, expected 1x1"),
        # the vertex-1 line alone is not a subrepresentation of P1
        '{ p = 1, degree = 0, vertex = "1", basis = [[1]] }': (ConfigValueError, "not a subrepresentation"),
    }
    for span, (kind, text) in bad.items():
        p = write(tmp_path, body % span)
        with pytest.raises(kind, match=text):
            parse_config(p)


def test_torsion_generators_must_give_a_torsion_pair(tmp_path):
    # S1 and S2 generate everything but P1, which is an extension of them
    p = write(tmp_path, """
        [torsion]
        generators = ["S1", "S2"]
        """)
    with pytest.raises(ConfigValueError, match="fails at P1"):
        parse_config(p)


def test_empty_matrices(tmp_path):
    p = write(tmp_path, """
        [reps.A]
        dims = [0, 2]
        maps = { a = [] }

        [reps.B]
        dims = [2, 0]
        maps = { a = [] }

        [reps.C]
        dims = [1, 1]
        maps = { a = [] }
        """)
    with pytest.raises(ShapeError, match="arrow a"):
        parse_config(p)
    p.write_text(p.read_text().replace("[reps.C]\ndims = [1, 1]\nmaps = { a = [] }\n", ""))
    cfg = parse_config(p)
    assert cfg.reps["A"].dims == (0, 2) and cfg.reps["B"].dims == (2, 0)
