import json

import jsonschema
import pytest

from halfrib.cli import main

SCALAR_SCHEMA = {
    "type": "object",
    "required": ["L", "num", "den"],
    "additionalProperties": False,
    "properties": {
        "L": {"type": "integer", "minimum": 1},
        "num": {"$ref": "#/$defs/poly"},
        "den": {"$ref": "#/$defs/poly", "minItems": 1},
    },
    "$defs": {
        "poly": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {"type": "integer"},
                    {"type": "array", "items": {"type": "integer"}, "minItems": 4, "maxItems": 4},
                ],
                "minItems": 2,
                "maxItems": 2,
            },
        }
    },
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_unknot_text(capsys):
    code, out, _ = run(capsys, "invariant", "--link", "braid 1: ; close")
    assert code == 0
    assert "invariant: -q - q^-1" in out.splitlines()


def test_empty_diagram_is_one(capsys):
    code, out, _ = run(capsys, "invariant", "--link", "")
    assert code == 0 and "invariant: 1" in out.splitlines()


def test_json_output_is_schema_valid_and_deterministic(capsys):
    args = ("--format", "json", "invariant", "--link", "braid 2: s1 s1 s1 ; close", "--normalize")
    code, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert code == 0 and first == second
    data = json.loads(first)
    for key in ("unnormalized", "normalized", "invariant"):
        jsonschema.validate(data[key], SCALAR_SCHEMA)
    assert data["writhe"] == 3


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "invariant", "--link", "object: V^ V_v\\nslice: cap@5")
    assert code == 2 and "line 2" in err


def test_usage_errors(capsys):
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "fs", "--rep", "Q9:1")[0] == 2
    assert run(capsys, "fs", "--ribbon", "phi:7")[0] == 2
    assert run(capsys, "invariant", "--link", "object: V^\\nslice: h+(1)@0", "--ribbon", "C")[0] == 2


def test_link_from_file(capsys, tmp_path):
    f = tmp_path / "hopf.tl"
    f.write_text("braid 2: s1 s1 ; close\n")
    code, out, _ = run(capsys, "invariant", "--link", str(f), "--ribbon", "C")
    assert code == 0 and "writhe: 2" in out


def test_fs_subcommand(capsys):
    assert "fs: -1" in run(capsys, "fs", "--rep", "A1:1", "--ribbon", "C")[1]
    assert "fs: 1" in run(capsys, "fs", "--rep", "A1:1", "--ribbon", "X2")[1]
    assert "fs: 0" in run(capsys, "fs", "--rep", "A2:1,0")[1]


def test_irrep_and_datum_dump(capsys):
    code, out, _ = run(capsys, "irrep", "--type", "A2", "--weight", "1,1", "--dump")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 8
    for m in data["E"]:
        for _, _, x in m["entries"]:
            jsonschema.validate(x, SCALAR_SCHEMA)
    code, out, _ = run(capsys, "irrep", "--type", "A3", "--dump-datum")
    assert json.loads(out)["L"] == 8


@pytest.mark.parametrize(
    "argv",
    [
        ("selftest",),
        ("xelement", "--rep", "A2:1,0"),
        ("rmatrix", "--rep", "A1:1", "--yang-baxter"),
        ("ribbons", "--type", "A3"),
        ("skein", "--link", "braid 2: s1 s1 s1 ; close"),
        ("verify", "--type", "A1"),
    ],
)
def test_subcommands_succeed(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip()


def test_ribbons_count(capsys):
    data = json.loads(run(capsys, "--format", "json", "ribbons", "--type", "A2")[1])
    assert data["count"] == 1 and data["choices"][0]["is_standard"]


def test_open_tangle_prints_operator(capsys):
    code, out, _ = run(capsys, "invariant", "--link", "object: V^\\nslice: h+(1)@0")
    assert code == 0 and "shape: [2, 2]" in out
