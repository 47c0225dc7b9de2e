import json
import math

from circlek.cli import main
from circlek.docio import parse_system


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fm_bunce_deddens_human(capsys):
    code, out, err = run(capsys, "fm", "--builtin", "bunce-deddens", "--m", "1..8")
    assert code == 0
    lines = [l for l in out.splitlines() if l.strip()]
    assert len(lines) == 9  # header + 8 rows
    for line in lines[1:]:
        assert line.split()[1] == "1"
        assert line.split()[2] == "yes"


def test_fm_machine_output_reparses(capsys):
    code, out, _ = run(
        capsys, "fm", "--builtin", "goodearl", "--m", "1..6", "--format", "machine"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "fm"
    assert [row["m"] for row in doc["rows"]] == list(range(1, 7))
    assert all(row["dimension"] == 1 and row["exact"] for row in doc["rows"])


def test_fm_from_file(tmp_path, capsys):
    doc = {
        "stages": [{"sizes": [1]}],
        "maps": [],
        "tail": {
            "kind": "periodic",
            "period": 1,
            "templates": [{"entries": [[[1, 1]]]}],
            "pads": [[0]],
        },
    }
    path = tmp_path / "constant.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "fm", "--system", str(path), "--m", "2", "--format", "machine")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows == [{"m": 2, "dimension": 0, "exact": True, "stabilization_stage": 0}]


def test_check_builtin_human(capsys):
    code, out, _ = run(capsys, "check", "--builtin", "bunce-deddens")
    assert code == 0
    assert "slow-dimension-growth:   yes" in out
    assert "rationally-k-stable:     yes" in out
    assert "k-stable:                yes" in out


def test_check_constant_machine(tmp_path, capsys):
    doc = {
        "stages": [{"sizes": [1]}],
        "maps": [],
        "tail": {
            "kind": "periodic",
            "period": 1,
            "templates": [{"entries": [[[1, 1]]]}],
            "pads": [[0]],
        },
    }
    path = tmp_path / "constant.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check", "--system", str(path), "--format", "machine")
    assert code == 0
    report = json.loads(out)
    assert report["slow_dimension_growth"]["value"] == "no"
    assert report["rationally_k_stable"]["value"] == "no"
    assert report["k_stable"]["value"] == "no"
    assert "F_2(iota_2)" in report["rationally_k_stable"]["witness"]
    assert report["checked_bounds"]["j_max"] >= 2


def test_builtin_emits_parseable_document(capsys):
    code, out, _ = run(capsys, "builtin", "--builtin", "goodearl:c=4,p=2")
    assert code == 0
    system = parse_system(out)
    assert system.stages[0].sizes == (4,)
    assert system.tail.templates[0][0][0].a == 4


def test_quotient_machine(capsys):
    code, out, _ = run(
        capsys, "quotient", "--builtin", "bunce-deddens", "--format", "machine"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["stages"] == [{"sizes": [1]}]
    assert doc["tail"]["templates"] == [{"entries": [[2]]}]


def test_quotient_human(capsys):
    code, out, _ = run(capsys, "quotient", "--builtin", "goodearl")
    assert code == 0
    assert "stages: [4]" in out
    assert "tail: periodic" in out


def _bd_hom_doc(grid=512):
    pts1 = [
        [math.cos(math.pi * k / (grid - 1)), math.sin(math.pi * k / (grid - 1))]
        for k in range(grid)
    ]
    pts2 = [
        [math.cos(math.pi * (1 + k / (grid - 1))), math.sin(math.pi * (1 + k / (grid - 1)))]
        for k in range(grid)
    ]
    return {
        "source": {"sizes": [1]},
        "target": {"sizes": [2]},
        "blocks": [
            [
                {
                    "multiplicity": 2,
                    "permutation": "(1 2)",
                    "paths": [
                        {"kind": "samples", "points": pts1},
                        {"kind": "samples", "points": pts2},
                    ],
                }
            ]
        ],
    }


def test_reduce_bunce_deddens_step(tmp_path, capsys):
    path = tmp_path / "hom.json"
    path.write_text(json.dumps(_bd_hom_doc()))
    code, out, _ = run(capsys, "reduce", "--system", str(path), "--format", "machine")
    assert code == 0
    doc = json.loads(out)
    assert doc["signature"]["entries"] == [[[2, 1]]]
    assert sorted(doc["diagonal"][0][0]["windings"]) == [0, 1]


def test_reduce_human_output(tmp_path, capsys):
    path = tmp_path / "hom.json"
    path.write_text(json.dumps(_bd_hom_doc()))
    code, out, _ = run(capsys, "reduce", "--system", str(path))
    assert code == 0
    assert "diagonal form:" in out
    assert "multiplicity 2" in out
    assert "signature matrix:" in out


def test_reduce_verify_reports_deviation(tmp_path, capsys):
    path = tmp_path / "hom.json"
    path.write_text(json.dumps(_bd_hom_doc()))
    code, out, _ = run(
        capsys, "reduce", "--system", str(path), "--verify", "--format", "machine"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["verify"]["max_deviation"] < 1e-9


def test_reduce_already_diagonal(tmp_path, capsys):
    doc = {
        "source": {"sizes": [1]},
        "target": {"sizes": [3]},
        "blocks": [
            [
                {
                    "multiplicity": 2,
                    "permutation": [1, 2],
                    "paths": [
                        {"kind": "power", "winding": 2, "phase": 0},
                        {"kind": "power", "winding": -1, "phase": 0},
                    ],
                }
            ]
        ],
    }
    path = tmp_path / "diag.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "reduce", "--system", str(path), "--format", "machine")
    assert code == 0
    parsed = json.loads(out)
    assert parsed["signature"]["entries"] == [[[2, 1]]]
    assert sorted(parsed["diagonal"][0][0]["windings"]) == [-1, 2]


def test_input_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"stages": []}')
    code, _, err = run(capsys, "fm", "--system", str(bad))
    assert code == 2
    assert "at least one stage" in err

    code, _, err = run(capsys, "fm", "--builtin", "no-such")
    assert code == 2

    code, _, err = run(capsys, "fm")
    assert code == 2
    assert "required" in err


def test_m_range_cap(capsys):
    code, _, err = run(capsys, "fm", "--builtin", "bunce-deddens", "--m", "1..20000")
    assert code == 2
    assert "no-cap" in err


def test_endpoint_mismatch_is_input_error(tmp_path, capsys):
    doc = _bd_hom_doc()
    doc["blocks"][0][0]["permutation"] = [1, 2]  # endpoints no longer match
    path = tmp_path / "hom.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "reduce", "--system", str(path))
    assert code == 2
    assert "endpoint" in err


def test_internal_inconsistency_exit_code(monkeypatch, capsys):
    from circlek import cli
    from circlek.stability import StabilityContradiction

    def boom(*args, **kwargs):
        raise StabilityContradiction("forced for the exit-code contract")

    monkeypatch.setattr(cli, "k_stability_report", boom)
    code, _, err = run(capsys, "check", "--builtin", "bunce-deddens")
    assert code == 3
    assert "internal inconsistency" in err
