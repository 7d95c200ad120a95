from wonder.cli import main
from wonder.errors import ComputationError, InputError, InvariantViolation


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_exit_code_attributes():
    assert InputError("x").exit_code == 1
    assert ComputationError("x").exit_code == 2
    assert InvariantViolation("x").exit_code == 3


def test_model_build_betti_pipeline(tmp_path, capsys):
    d = tmp_path / "d.json"
    r = tmp_path / "r.json"
    assert main(["model", "fm-p1", "--n", "3", "--out", str(d)]) == 0
    assert main(["build", str(d), "--out", str(r)]) == 0
    code, out, _ = run(capsys, "betti", str(r))
    assert code == 0
    assert out.strip().splitlines()[-1] == "1 4 4 1"


def test_keel_pd_pipeline(tmp_path, capsys):
    d = tmp_path / "d.json"
    r = tmp_path / "r.json"
    main(["model", "keel", "--n", "2", "--out", str(d)])
    main(["build", str(d), "--out", str(r)])
    code, out, _ = run(capsys, "pd", str(r))
    assert code == 0
    assert out.strip() == "PD: yes; discrepancies: 0 0 0"


def test_pd_json(tmp_path, capsys):
    import json

    d = tmp_path / "d.json"
    r = tmp_path / "r.json"
    main(["model", "fm-p1", "--n", "2", "--out", str(d)])
    main(["build", str(d), "--out", str(r)])
    code, out, _ = run(capsys, "pd", str(r), "--json")
    payload = json.loads(out)
    assert code == 0 and payload["is_pd"] is True


def test_decompose(tmp_path, capsys):
    d = tmp_path / "d.json"
    main(["model", "fm-p1", "--n", "3", "--out", str(d)])
    code, out, _ = run(capsys, "decompose", str(d))
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "nest={} mu={} burrow=1|2|3 shift=0 dims=1 3 3 1"
    assert lines[-1] == "poincare: 1 4 4 1"
    assert "nest={D123} mu={D123:1} burrow=123 shift=1 dims=0 1 1 0" in lines


def test_validate_failure(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{ truncated")
    code, _, err = run(capsys, "validate", str(f))
    assert code == 1
    assert "cannot parse" in err


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "betti", "--bogus")
    assert code == 1


def test_rewrite_cap_exit_code(tmp_path, capsys):
    d = tmp_path / "d.json"
    main(["model", "fm-p1", "--n", "3", "--out", str(d)])
    code, _, err = run(capsys, "build", str(d), "--max-rewrites", "0")
    assert code == 2
    assert "rewrite cap" in err


def test_oracle_and_compare(tmp_path, capsys):
    d = tmp_path / "d.json"
    fx = tmp_path / "fx.json"
    main(["model", "keel", "--n", "2", "--out", str(d)])
    main(["model", "keel-oracle", "--n", "2", "--out", str(fx)])
    code, out, _ = run(capsys, "oracle", str(fx))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "dims: 1 5 1"
    assert lines[1] == "PD: yes; discrepancies: 0 0 0"
    code, out, _ = run(capsys, "compare", "--diagram", str(d), "--oracle", str(fx))
    assert code == 0
    assert "result: pass" in out


def test_synth_model(tmp_path, capsys):
    r = tmp_path / "r.json"
    assert main(["model", "synth", "--dims", "1,2,1", "--seed", "7", "--out", str(r)]) == 0
    code, out, _ = run(capsys, "pd", str(r))
    assert code == 0 and out.strip() == "PD: yes; discrepancies: 0 0 0"
    rb = tmp_path / "rb.json"
    assert (
        main(
            ["model", "synth", "--dims", "1,2,1", "--break", "1", "--seed", "7", "--out", str(rb)]
        )
        == 0
    )
    code, out, _ = run(capsys, "pd", str(rb))
    assert code == 0 and out.strip() == "PD: no; discrepancies: 0 1 0"


def test_presentation_command(tmp_path, capsys):
    d = tmp_path / "d.json"
    main(["model", "fm-p1", "--n", "3", "--out", str(d)])
    code, out, _ = run(capsys, "presentation", str(d))
    assert code == 0
    assert "result: pass" in out


def test_blocks_and_discrepancy(tmp_path, capsys):
    d = tmp_path / "d.json"
    main(["model", "fm-p1", "--n", "3", "--out", str(d)])
    code, out, _ = run(capsys, "blocks", str(d))
    assert code == 0 and "result: pass" in out
    code, out, _ = run(capsys, "discrepancy", str(d))
    assert code == 0 and "matches" in out


def test_validate_ok(tmp_path, capsys):
    d = tmp_path / "d.json"
    main(["model", "keel", "--n", "1", "--out", str(d)])
    code, out, _ = run(capsys, "validate", str(d))
    assert code == 0
    assert "result: pass" in out


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.startswith("wonder ")


def test_outputs_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["model", "keel", "--n", "2", "--out", str(a)])
    main(["model", "keel", "--n", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    ra, rb = tmp_path / "ra.json", tmp_path / "rb.json"
    main(["build", str(a), "--out", str(ra)])
    main(["build", str(b), "--out", str(rb)])
    assert ra.read_bytes() == rb.read_bytes()
    sa, sb = tmp_path / "sa.json", tmp_path / "sb.json"
    main(["model", "synth", "--dims", "1,2,2,1", "--seed", "3", "--out", str(sa)])
    main(["model", "synth", "--dims", "1,2,2,1", "--seed", "3", "--out", str(sb)])
    assert sa.read_bytes() == sb.read_bytes()
