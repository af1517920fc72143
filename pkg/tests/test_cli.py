import json
import os

import pytest

from floquet_well.cli import (
    ConfigError,
    load_energies_csv,
    main,
    parse_config,
    parse_kv_file,
)


def test_paper_defaults_parse():
    cfg = parse_config(["static", "--paper-defaults"])
    p = cfg.params
    assert (p.a, p.b, p.v0, p.v0_prime, p.mass) == (1.0, 2.0, 15.0, 7.5, 1.0)


def test_invariant_violation_rejected():
    with pytest.raises(ConfigError):
        parse_config(["static", "--a", "1", "--b", "2", "--v0", "15",
                      "--v0-prime", "7.5", "--v1", "10", "--omega", "3"])


def test_sweep_range_required():
    with pytest.raises(ConfigError, match="sweep range required"):
        parse_config(["sweep", "--paper-defaults", "--v1", "1.5"])


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("a = 1\nbogus = 3\n")
    with pytest.raises(ConfigError, match="bogus"):
        parse_kv_file(str(cfg))


def test_config_file_with_comments_and_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# reference well\n"
        "a = 1\n"
        "b = 2\n"
        "v0 = 15\n"
        "v0_prime = 7.5  # half the barrier\n"
        "v1 = 1.5\n"
        "omega = 3.0\n"
    )
    parsed = parse_config(["static", "--config", str(cfg), "--omega", "4.5"])
    assert parsed.params.v1 == 1.5
    assert parsed.params.omega == 4.5  # flag wins over file


def test_bad_config_value(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("a = fast\n")
    with pytest.raises(ConfigError, match="bad value"):
        parse_kv_file(str(cfg))


def test_usage_error_exit_code(capsys):
    assert main(["sweep", "--paper-defaults"]) == 1
    assert "sweep range required" in capsys.readouterr().err


def test_solver_failure_exit_code(tmp_path, capsys):
    # threshold scan with both endpoints the same kind -> solver error (2)
    code = main([
        "threshold", "--paper-defaults",
        "--omega-window", "8.7", "10.2",
        "--v1-range", "1.5", "3.0",
        "--out-dir", str(tmp_path), "--no-figures",
    ])
    assert code == 2
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["error"] == "ThresholdScanError"


def test_static_output_schema(tmp_path):
    code = main(["static", "--paper-defaults", "--out-dir", str(tmp_path), "--no-figures"])
    assert code == 0
    path = tmp_path / "static_spectrum.csv"
    lines = path.read_text().splitlines()
    assert lines[0] == "kind,re_eps,im_eps,re_eps_over_v0,im_eps_over_v0,residual"
    assert len(lines) == 3
    assert lines[1].startswith("bound,")
    assert lines[2].startswith("resonance,")
    assert not (tmp_path / "static_levels.png").exists()


def test_static_figure_rendered(tmp_path):
    main(["static", "--paper-defaults", "--out-dir", str(tmp_path)])
    png = tmp_path / "static_levels.png"
    assert png.exists() and png.stat().st_size > 1000


def test_solve_roundtrip_from_spectrum_csv(tmp_path):
    """A spectrum CSV re-read as seeds reproduces the same roots."""
    main(["static", "--paper-defaults", "--out-dir", str(tmp_path), "--no-figures"])
    seeds = load_energies_csv(str(tmp_path / "static_spectrum.csv"))
    assert len(seeds) == 2
    for seed in seeds:
        out = tmp_path / f"solve_{seed.real:.3f}"
        code = main([
            "solve", "--paper-defaults", "--omega", "4.5",
            "--seed-re", repr(seed.real), "--seed-im", repr(seed.imag),
            "--out-dir", str(out), "--no-figures",
        ])
        assert code == 0
        roots = load_energies_csv(str(out / "solve_root.csv"))
        assert abs(roots[0] - seed) < 1e-12


def test_outputs_deterministic(tmp_path):
    """Identical configs produce byte-identical delimited outputs."""
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    args = ["sweep", "--paper-defaults", "--v1", "1.5",
            "--start", "8.7", "--stop", "10.2", "--points", "40",
            "--no-figures"]
    assert main(args + ["--out-dir", str(d1)]) == 0
    assert main(args + ["--out-dir", str(d2)]) == 0
    for name in ("sweep_branches.csv", "sweep_events.json"):
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()


def test_sweep_output_schema(tmp_path):
    code = main(["sweep", "--paper-defaults", "--v1", "1.5",
                 "--start", "8.7", "--stop", "10.2", "--points", "40",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    lines = (tmp_path / "sweep_branches.csv").read_text().splitlines()
    assert lines[0] == "param,re_eps,im_eps,re_eps_zone,n_zone,residual,branch_label"
    events = json.loads((tmp_path / "sweep_events.json").read_text())
    assert isinstance(events, list) and events
    assert set(events[0]) == {"kind", "parameter_value", "gap_re", "gap_im", "branches"}
    assert (tmp_path / "sweep_branches.png").stat().st_size > 1000


def test_sweep_full_range_finds_both_crossing_kinds(tmp_path):
    """The headline frequency sweep emits both a direct and an avoided event."""
    code = main(["sweep", "--paper-defaults", "--v1", "1.5",
                 "--start", "3", "--stop", "15", "--points", "200",
                 "--n-sidebands", "2", "--out-dir", str(tmp_path), "--no-figures"])
    assert code == 0
    events = json.loads((tmp_path / "sweep_events.json").read_text())
    kinds = [ev["kind"] for ev in events]
    assert "direct" in kinds
    assert kinds.count("avoided") == 1


def test_survival_output_schema(tmp_path):
    code = main(["survival", "--paper-defaults", "--v1", "1.5", "--omega", "10.5",
                 "--seed-re", "12.97", "--seed-im", "-0.04",
                 "--t-max", "5", "--t-points", "11",
                 "--out-dir", str(tmp_path), "--no-figures"])
    assert code == 0
    lines = (tmp_path / "survival.csv").read_text().splitlines()
    assert lines[0] == "t,P,h,Pbar"
    assert len(lines) == 12
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 1.0


def test_float_serialization_roundtrips(tmp_path):
    main(["static", "--paper-defaults", "--out-dir", str(tmp_path), "--no-figures"])
    row = (tmp_path / "static_spectrum.csv").read_text().splitlines()[2].split(",")
    value = float(row[1])
    # 17 significant digits round-trip doubles exactly
    assert f"{value:.17g}" == row[1]


def test_variant_flag_accepted(tmp_path):
    code = main(["solve", "--paper-defaults", "--v1", "1.5", "--omega", "10.5",
                 "--variant", "bottom", "--seed-re", "12.97", "--seed-im", "-0.04",
                 "--out-dir", str(tmp_path), "--no-figures"])
    assert code == 0
