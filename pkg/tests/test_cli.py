import json
import os

import pytest

from substfactor.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_catalog_list(capsys):
    code, out = run(capsys, "catalog", "list")
    assert code == 0
    names = out.strip().splitlines()
    assert "squiral" in names and "table" in names and "fmax" in names


def test_catalog_show_roundtrip(capsys):
    from substfactor.core import catalog, parse_substitution

    code, out = run(capsys, "catalog", "show", "table")
    assert code == 0
    assert parse_substitution(out) == catalog("table")


def test_generate_fibonacci_word(capsys):
    code, out = run(capsys, "generate", "fibonacci", "--level", "5")
    assert code == 0
    assert out.strip() == "abaababaabaab"
    assert len(out.strip()) == 13


def test_generate_seed_level0(capsys):
    code, out = run(capsys, "generate", "tm", "--level", "0", "--seed", "1|1",
                    "--period", "2")
    assert code == 0
    assert out.strip() == "11"


def test_generate_rejects_illegal_seed(capsys):
    code = main(["generate", "toeplitzT", "--level", "0", "--seed", "A|B",
                 "--period", "2"])
    assert code == 1


def test_generate_render_ppm(tmp_path, capsys):
    target = tmp_path / "patch.ppm"
    code, out = run(capsys, "generate", "table", "--level", "3",
                    "--render", str(target))
    assert code == 0
    content = target.read_text().splitlines()
    assert content[0] == "P3"
    assert content[1] == "8 8"


def test_generate_render_png(tmp_path, capsys):
    target = tmp_path / "patch.png"
    code, _ = run(capsys, "generate", "table", "--level", "6",
                  "--render", str(target))
    assert code == 0
    assert target.stat().st_size > 1000


def test_generate_json(capsys):
    code, out = run(capsys, "generate", "table", "--level", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["outputs"]["extent"] == [2, 2]


def test_analyze_legal_squiral(capsys):
    code, out = run(capsys, "analyze", "squiral", "legal", "--shape", "2x2")
    assert code == 0
    assert out.splitlines()[0] == "legal 2x2 patterns: 14"


def test_analyze_seeds_table(capsys):
    code, out = run(capsys, "analyze", "table", "seeds", "--period", "2")
    assert code == 0
    assert out.splitlines()[0] == "seeds (period 2): 24"


def test_analyze_toeplitz(capsys):
    code, out = run(capsys, "analyze", "toeplitzT", "toeplitz", "--depth", "4",
                    "--window", "1000", "--period", "2")
    assert code == 0
    assert "4*Z + 0" in out
    assert "exceptional: -1" in out


def test_analyze_columns(capsys):
    code, out = run(capsys, "analyze", "pd", "columns")
    assert code == 0
    assert out.startswith("coincidence (level 1")


def test_analyze_matrix(capsys):
    code, out = run(capsys, "analyze", "gtm", "matrix", "--k", "2", "--l", "3")
    assert code == 0
    assert "2 3" in out and "primitive: True" in out


def test_analyze_corners(capsys):
    code, out = run(capsys, "analyze", "fmax", "corners")
    assert code == 0
    assert "center g" in out
    assert "horizontal separations: f g" in out


def test_factor_identify(capsys):
    code, out = run(capsys, "factor", "fmax", "--identify", "f=g")
    assert code == 0
    assert out.startswith("alphabet: a b c d e f")


def test_factor_identify_inconsistent_exit_2(capsys):
    code, out = run(capsys, "factor", "fmax", "--identify", "a=e")
    assert code == 2
    assert "inconsistent" in out


def test_factor_map_by_name(capsys):
    code, out = run(capsys, "factor", "squiral", "--map", "squiral_blockmap")
    assert code == 0
    assert "g g a / d c g / a b g" in out


def test_factor_map_from_file(tmp_path, capsys):
    from substfactor.factors import named_block_map

    path = tmp_path / "blockmap.txt"
    path.write_text(named_block_map("squiral_blockmap").to_text())
    code, out = run(capsys, "factor", "squiral", "--map", str(path))
    assert code == 0
    assert "g g a / d c g / a b g" in out


def test_factor_search(capsys):
    code, out = run(capsys, "factor", "tm", "--search", "pd", "--window", "2")
    assert code == 0
    assert "window: 2" in out


def test_zeta_closed_with_check(capsys):
    code, out = run(capsys, "zeta", "squiral", "--check")
    assert code == 0
    assert "zeta = 1/((1-9z)(1-z)(1-z^2)^3)" in out
    assert "check euler_product: True" in out


def test_zeta_ap_method(capsys):
    code, out = run(capsys, "zeta", "fmax", "--method", "ap", "--terms", "6")
    assert code == 0
    assert "1/((1-9z)(1-z)^3)" in out
    assert "12 84 732" in out.replace("a_m  = ", "")


def test_zeta_solenoid(capsys):
    code, out = run(capsys, "zeta", "solenoid", "--dim", "2", "--q", "2")
    assert code == 0
    assert "(1-2z)^2/((1-4z)(1-z))" in out


def test_zeta_table_check_reports_seed_discrepancy(capsys):
    code, out = run(capsys, "zeta", "table", "--check", "--terms", "4")
    assert code == 0
    assert "check hull_a2: 28" in out
    assert "check subshift_period2_seeds: 24" in out


def test_cohomology_table(capsys):
    code, out = run(capsys, "cohomology", "table")
    assert code == 0
    assert "H2 = Z[1/4] + Z[1/2]^4 + Z^3 + Z_2" in out


def test_cohomology_identify(capsys):
    code, out = run(capsys, "cohomology", "fmax_ident", "--identify", "e=f=g")
    assert code == 0
    assert "H2 = Z[1/9] + Z^4" in out


def test_unknown_name_is_operational_error(capsys):
    assert main(["cohomology", "nope"]) == 1


def test_determinism_byte_identical(capsys):
    _, out1 = run(capsys, "analyze", "table", "legal", "--shape", "2x2", "--json")
    _, out2 = run(capsys, "analyze", "table", "legal", "--shape", "2x2", "--json")
    assert out1 == out2


def test_smoke_matrix_every_catalog_entry(capsys):
    # every entry is reachable through every applicable subcommand
    from substfactor.core import CATALOG_NAMES, catalog

    for name in CATALOG_NAMES:
        kw = []
        if name in ("gtm", "gpd"):
            kw = ["--k", "2", "--l", "1"]
        if name == "fmax_ident":
            kw = ["--identify", "f=g"]
        assert main(["catalog", "show", name] + kw) == 0
        assert main(["generate", name, "--level", "1"] + kw) == 0
        assert main(["analyze", name, "matrix"] + kw) == 0
    capsys.readouterr()
