import json

import pytest

from gripscribe import ConfigError, Variant, parse_config
from gripscribe.cli import main
from gripscribe.dynamics import DamperPlacement


def test_empty_config_is_valid_defaults():
    cfg = parse_config({})
    assert cfg.mechanism.l1 == 0.25
    assert cfg.hand.k == 200.0
    assert cfg.tremor.kind == "sinusoid"
    assert cfg.out_dir == "out"


def test_full_roundtrip_of_known_fields():
    doc = {
        "mechanism": {"variant": "B", "l1": 0.3, "base": [0.1, -0.2]},
        "dynamics": {"b1": 0.1, "damper_placement": "relative_at_joints"},
        "hand": {"k": 150.0, "d": 5.0},
        "tremor": {"kind": "band_noise", "band": [3.0, 10.0], "seed": 4},
        "intent": {"kind": "circle", "radius": 0.04},
        "gripper": {"s_max": 30.0},
        "mount": {"k3": 0.025},
        "out_dir": "artifacts",
    }
    cfg = parse_config(doc)
    assert cfg.mechanism.variant is Variant.B
    assert cfg.dynamics.damper_placement is DamperPlacement.RELATIVE_AT_JOINTS
    assert cfg.tremor.band == (3.0, 10.0)
    assert cfg.out_dir == "artifacts"


def test_unknown_section_and_field_errors():
    with pytest.raises(ConfigError, match="sprocket: unknown section"):
        parse_config({"sprocket": {}})
    with pytest.raises(ConfigError, match="tremor.flavor: unknown field"):
        parse_config({"tremor": {"flavor": "minty"}})


def test_validation_error_names_field_path():
    with pytest.raises(ConfigError, match=r"mechanism\.l1"):
        parse_config({"mechanism": {"l1": -1.0}})
    with pytest.raises(ConfigError, match=r"hand\.k: expected a number"):
        parse_config({"hand": {"k": "stiff"}})
    with pytest.raises(ConfigError, match=r"mechanism\.base"):
        parse_config({"mechanism": {"base": [1.0]}})


def _write_config(tmp_path, doc):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_cli_config_error_exit_code(tmp_path, capsys):
    path = _write_config(tmp_path, {"mechanism": {"l1": -1.0}})
    code = main(["workspace", "--config", path, "--out", str(tmp_path / "o")])
    assert code == 1
    assert "mechanism.l1" in capsys.readouterr().err


def test_cli_workspace_defaults(tmp_path, capsys):
    out = tmp_path / "ws"
    code = main(["workspace", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "portrait" in printed and "landscape" in printed
    assert printed.count("covered=True") == 2
    assert (out / "workspace_portrait.svg").exists()
    assert (out / "workspace_landscape.svg").exists()


def test_cli_workspace_domain_error_exit_code(tmp_path, capsys):
    path = _write_config(tmp_path, {"mechanism": {"l1": 0.05, "l2": 0.05}})
    code = main(["workspace", "--config", path, "--out", str(tmp_path / "o")])
    assert code == 2
    assert "NoFeasiblePlacement" in capsys.readouterr().err


def test_cli_simulate_writes_deterministic_outputs(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = main(["simulate", "--out", str(out), "--duration", "0.5",
                     "--seed", "3"])
        assert code == 0
        outs.append((out / "trace.csv").read_bytes())
        assert (out / "pen_trace.svg").exists()
    assert outs[0] == outs[1]
    header = outs[0].decode().splitlines()[0]
    assert header.startswith("t,target_x,target_y,theta1")


def test_cli_simulate_variant_switch(tmp_path):
    out = tmp_path / "v"
    code = main(["simulate", "--out", str(out), "--duration", "0.2",
                 "--variant", "A"])
    assert code == 0


def test_cli_sweep_single_frequency(tmp_path, capsys):
    out = tmp_path / "sw"
    code = main(["sweep", "--out", str(out), "--f-list", "8"])
    assert code == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "f_hz,gain,phase_rad"
    assert len(lines) == 2
    assert (out / "sweep.svg").exists()


def test_cli_penholder_table(tmp_path, capsys):
    out = tmp_path / "ph"
    code = main(["penholder", "--out", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "diameter_mm" in printed
    assert len(printed.splitlines()) >= 14
    assert (out / "penholder.svg").exists()
    code = main(["penholder", "--out", str(out), "--diameter", "25"])
    assert code == 2


def test_cli_mount_solutions(tmp_path, capsys):
    code = main(["mount", "--out", str(tmp_path / "m"), "--x", "0.05",
                 "--y", "0.03", "--phi-deg", "15"])
    assert code == 0
    printed = capsys.readouterr().out
    assert printed.count("branch") == 2
    code = main(["mount", "--out", str(tmp_path / "m"), "--x", "0.2",
                 "--y", "0.0"])
    assert code == 2
