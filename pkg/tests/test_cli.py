import json

import jsonschema
import pytest

from gelltool.cli import main
from gelltool.report import load_schema, parse_spec
from gelltool.errors import SpecError

ALL = ["trivial_d1", "trivial_d2", "two_adic", "three_adic", "two_adic_finite", "four_adic_finite",
       "diag23", "diag23_symbolic", "rotation_fifth", "shear_d2", "bases_d2", "twisted_d3", "twisted_d4"]


@pytest.mark.parametrize("name", ALL)
def test_gell_reports_validate(name, fixture_path, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["gell", str(fixture_path(name)), "--depth", "3", "--out", str(out)]) == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    jsonschema.validate(doc, load_schema("report.schema.json"))
    assert doc["consistent"] is True
    assert "consistent" in capsys.readouterr().out


def test_gell_stdout_is_pure_json(fixture_path, capsys):
    assert main(["gell", str(fixture_path("diag23")), "--depth", "2", "--out", "-"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["gap_labels"]["untwisted"]["generator"] == "1/36"


def test_verify_gap(fixture_path, capsys):
    assert main(["verify-gap", str(fixture_path("two_adic")), "--depth", "4"]) == 0
    out = capsys.readouterr().out
    assert "(1/16)Z" in out and out.count("equal") == 5


def test_verify_gap_rejects_twisted(fixture_path):
    assert main(["verify-gap", str(fixture_path("rotation_fifth"))]) == 1


def test_compare(fixture_path, capsys):
    assert main(["compare", str(fixture_path("two_adic")), str(fixture_path("three_adic"))]) == 0
    assert "distinguished" in capsys.readouterr().out
    assert main(["compare", str(fixture_path("two_adic_finite")), str(fixture_path("four_adic_finite")),
                 "--certificate", str(fixture_path("cert_2222_to_44"))]) == 0
    assert "verified" in capsys.readouterr().out


def test_compare_bad_certificate(fixture_path, tmp_path):
    cert = tmp_path / "c.json"
    cert.write_text(json.dumps({"stage_map": [0, 1, 1, 2, 2], "maps": [[[["1"]], [["1"]]]] * 5}))
    rc = main(["compare", str(fixture_path("two_adic_finite")), str(fixture_path("four_adic_finite")),
               "--certificate", str(cert)])
    assert rc == 2


def test_rieffel_cli(capsys):
    assert main(["rieffel", "--p", "2", "--q", "7", "--eps", "1/7"]) == 0
    assert json.loads(capsys.readouterr().out)["trace_exact"] == "2/7"
    assert main(["rieffel", "--p", "3", "--q", "6", "--eps", "1/6"]) == 1


def test_missing_file_exit_code(tmp_path):
    assert main(["gell", str(tmp_path / "nope.json")]) == 1


@pytest.mark.parametrize("doc, pointer", [
    ({"rank": 2, "steps": [[[2, 0], [0]]]}, "/steps/0"),
    ({"rank": 1, "steps": [[["x"]]]}, "/steps/0/0/0"),
    ({"rank": 2, "theta": ["1/2", "1/3"]}, "/theta"),
    ({"rank": 1, "steps": [[[0]]]}, "/steps/0"),
    ({"rank": 1, "bases": [[[1]], [[2]], [[3]]]}, "/bases"),
])
def test_spec_errors_carry_pointer(doc, pointer):
    with pytest.raises(SpecError) as err:
        parse_spec(doc)
    assert str(err.value).startswith(pointer)


def test_spec_error_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"rank": 2, "steps": [[[2, 0], [0, "a"]]]}))
    assert main(["gell", str(p)]) == 1
    assert "/steps/0/1/1" in capsys.readouterr().err
