import random

import pytest

from nilp2.cli import main
from nilp2.constructions import extraspecial_p5, heisenberg
from nilp2.errors import BadIndex, BadMagic, EntryOutOfRange, NotOddPrime, ParseError
from nilp2.fileformats import (
    format_generator_map,
    format_group,
    format_identification,
    parse_generator_map_text,
    parse_group_text,
    parse_identification_text,
)
from nilp2.group_core import cyclic, elementary_abelian, hom_from_images
from nilp2.products import Identification, nilpotent2_product
from nilp2.selfcheck import random_identification, random_presentation

HEISENBERG_FILE = "nilp2 v1\np 3\nn 2\nm 1\nc 2 1 1\n"


# -- parsing ---------------------------------------------------------------------


def test_parse_heisenberg():
    g = parse_group_text(HEISENBERG_FILE)
    assert g == heisenberg(3)


def test_format_is_canonical():
    assert format_group(heisenberg(3)) == HEISENBERG_FILE


def test_parse_accepts_comments_and_blanks():
    text = "# a comment\nnilp2 v1\n\np 3\nn 2  # inline\nm 1\nc 2 1 1\n"
    assert parse_group_text(text) == heisenberg(3)


def test_parse_bad_magic():
    with pytest.raises(BadMagic):
        parse_group_text("group v0\np 3\nn 1\nm 0\n")


def test_parse_bad_index():
    with pytest.raises(BadIndex) as exc:
        parse_group_text("nilp2 v1\np 3\nn 2\nm 1\nc 1 2 1\n")
    assert "line 5" in str(exc.value)


def test_parse_duplicate_pair():
    with pytest.raises(ParseError):
        parse_group_text("nilp2 v1\np 3\nn 2\nm 1\nc 2 1 1\nc 2 1 2\n")


def test_parse_entry_out_of_range():
    with pytest.raises(EntryOutOfRange):
        parse_group_text("nilp2 v1\np 3\nn 2\nm 1\nc 2 1 4\n")


def test_parse_even_prime():
    with pytest.raises(NotOddPrime):
        parse_group_text("nilp2 v1\np 2\nn 1\nm 0\n")


def test_parse_header_order_enforced():
    with pytest.raises(ParseError):
        parse_group_text("nilp2 v1\nn 2\np 3\nm 1\nc 2 1 1\n")


def test_identification_roundtrip_single_line():
    h = heisenberg(3)
    ident = Identification(h, h, ((1,),), ((1,),))
    text = format_identification(ident)
    assert text == "id 1 -> 1\n"
    assert parse_identification_text(text, h, h) == ident


def test_map_format_example():
    a, b = cyclic(3), cyclic(3)
    res = nilpotent2_product(a, b)
    text = format_generator_map(res.embed_left)
    assert text == "gen 1 -> 1 0 | 0\n"
    assert parse_generator_map_text(text, a, res.group) == res.embed_left


def test_random_roundtrips():
    rng = random.Random(99)
    for _ in range(30):
        p = rng.choice([3, 5])
        g = random_presentation(rng, p)
        assert parse_group_text(format_group(g)) == g
        a, b = random_presentation(rng, p), random_presentation(rng, p)
        ident = random_identification(rng, a, b)
        assert parse_identification_text(format_identification(ident), a, b) == ident
        dom, cod = random_presentation(rng, p), random_presentation(rng, p)
        images = [cod.random_element(rng) for _ in range(dom.n)]
        gmap = hom_from_images(dom, cod, images)
        assert parse_generator_map_text(format_generator_map(gmap), dom, cod) == gmap


# -- commands ---------------------------------------------------------------------


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_capable_command(tmp_path, capsys):
    path = write(tmp_path, "h.grp", HEISENBERG_FILE)
    assert main(["capable", path]) == 0
    out = capsys.readouterr().out
    assert "verdict = capable" in out
    assert "method = epicentre_trivial" in out
    assert "epicentre_dim = 0" in out


def test_capable_determinism(tmp_path, capsys):
    path = write(tmp_path, "e.grp", format_group(extraspecial_p5(3)))
    assert main(["capable", path]) == 0
    first = capsys.readouterr().out
    assert main(["capable", path]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert "verdict = not_capable" in first


def test_usage_errors(capsys):
    assert main(["capable"]) == 1
    assert main(["no-such-command"]) == 1
    assert main([]) == 1


def test_validation_error_exit_code(tmp_path, capsys):
    path = write(tmp_path, "bad.grp", "nilp2 v1\np 3\nn 2\nm 2\nc 2 1 1 0\n")
    assert main(["capable", path]) == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_inspect_command(tmp_path, capsys):
    path = write(tmp_path, "h.grp", HEISENBERG_FILE)
    assert main(["inspect", path]) == 0
    out = capsys.readouterr().out
    assert "order_exp = 3" in out
    assert "center_equals_derived = true" in out


def test_epicentre_command(tmp_path, capsys):
    path = write(tmp_path, "e.grp", format_group(extraspecial_p5(3)))
    assert main(["epicentre", path]) == 0
    out = capsys.readouterr().out
    assert "epicentre_dim = 1" in out
    assert "epicentre_basis = 1" in out


def test_epicentre_precondition_exit(tmp_path, capsys):
    path = write(tmp_path, "a.grp", format_group(elementary_abelian(3, 2)))
    assert main(["epicentre", path]) == 2


def test_rp_check_command(tmp_path, capsys):
    path = write(tmp_path, "h.grp", HEISENBERG_FILE)
    assert main(["rp-check", path]) == 0
    out = capsys.readouterr().out
    assert "rp_status = non_member" in out


def test_product_command_and_verify_embed(tmp_path, capsys):
    a = write(tmp_path, "a.grp", format_group(cyclic(3)))
    b = write(tmp_path, "b.grp", format_group(cyclic(3)))
    out_path = str(tmp_path / "prod.grp")
    map_path = str(tmp_path / "ia.map")
    assert main(["product", "--kind", "nilpotent2", a, b, "-o", out_path, "--map-a", map_path]) == 0
    produced = parse_group_text(open(out_path, encoding="utf-8").read())
    assert produced == heisenberg(3)
    capsys.readouterr()
    assert main(["verify-embed", a, out_path, "--map", map_path]) == 0
    assert "embedding_ok = true" in capsys.readouterr().out

    # a non-injective map must fail verification with exit 3
    bad_map = write(tmp_path, "bad.map", "gen 1 -> 0 0 | 0\n")
    assert main(["verify-embed", a, out_path, "--map", bad_map]) == 3
    assert "embedding_ok = false" in capsys.readouterr().out


def test_product_identify_usage(tmp_path):
    a = write(tmp_path, "a.grp", format_group(cyclic(3)))
    b = write(tmp_path, "b.grp", format_group(cyclic(3)))
    ident = write(tmp_path, "i.id", "")
    out_path = str(tmp_path / "prod.grp")
    assert main(["product", "--kind", "direct", a, b, "--identify", ident, "-o", out_path]) == 1


def test_amalgam_product_command(tmp_path, capsys):
    h = write(tmp_path, "h.grp", HEISENBERG_FILE)
    ident = write(tmp_path, "c.id", "id 1 -> 1\n")
    out_path = str(tmp_path / "am.grp")
    assert main(["product", "--kind", "amalgam", h, h, "--identify", ident, "-o", out_path]) == 0
    out = capsys.readouterr().out
    assert "n = 4" in out
    assert "m = 5" in out


def test_extend_command_report(tmp_path, capsys):
    h = write(tmp_path, "h.grp", HEISENBERG_FILE)
    out_path = str(tmp_path / "g2.grp")
    report_path = str(tmp_path / "r.txt")
    assert main(["extend", "--mode", "noncapable", h, "-o", out_path, "--report", report_path]) == 0
    report = open(report_path, encoding="utf-8").read()
    assert "verdict = not_capable" in report
    assert "bound_claimed = 6" in report
    assert "bound_actual = 6" in report
    assert "bound_ok = true" in report
    assert "embedding_ok = true" in report
    assert report == capsys.readouterr().out
    produced = parse_group_text(open(out_path, encoding="utf-8").read())
    assert (produced.n, produced.m) == (8, 17)


def test_extend_capable_report_keys_in_order(tmp_path, capsys):
    c = write(tmp_path, "c.grp", format_group(cyclic(3)))
    out_path = str(tmp_path / "g1.grp")
    assert main(["extend", "--mode", "capable", c, "-o", out_path]) == 0
    out = capsys.readouterr().out
    keys = [line.split(" = ")[0] for line in out.strip().splitlines()]
    assert keys == [
        "verdict", "method", "epicentre_dim", "epicentre_basis", "n", "m",
        "order_exp", "rp_status", "rp_reasons", "bound_claimed",
        "bound_actual", "bound_ok", "embedding_ok",
    ]
    assert "verdict = capable" in out
    assert "bound_claimed = 3" in out


def test_decompose_command(tmp_path, capsys):
    plane = write(tmp_path, "p.grp", format_group(elementary_abelian(3, 2)))
    assert main(["decompose", plane]) == 0
    out = capsys.readouterr().out
    assert "decomposition = found" in out
    assert "subgroups = 6" in out

    h = write(tmp_path, "h.grp", HEISENBERG_FILE)
    assert main(["decompose", h]) == 0
    out = capsys.readouterr().out
    assert "decomposition = none" in out
    assert "subgroups = 19" in out


def test_decompose_max_order(tmp_path, capsys):
    e = write(tmp_path, "e.grp", format_group(extraspecial_p5(3)))
    assert main(["decompose", e, "--max-order", "81"]) == 0
    out = capsys.readouterr().out
    assert "decomposition = exceeds_cap" in out


def test_env_cap_override(tmp_path, capsys, monkeypatch):
    e = write(tmp_path, "e.grp", format_group(extraspecial_p5(3)))
    monkeypatch.setenv("NILP2_MAX_ORDER", "81")
    assert main(["decompose", e]) == 0
    assert "decomposition = exceeds_cap" in capsys.readouterr().out
