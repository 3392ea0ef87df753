import copy
import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from rocbound.cli import (
    ConfigError,
    bundled_scenarios,
    dump_config,
    load_scenario,
    main,
    parse_scenario,
)

BASE = {
    "prior": {"alpha": 0.5},
    "sensors": {"k": 1, "noise_vars_db": [0]},
    "gains": {"model": "fixed", "values_db": [0]},
    "signal": {"model": "fixed", "energy_db": 10},
}


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def read_csv(text):
    header = [ln for ln in text.splitlines() if ln.startswith("#")]
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(body))))
    return header, rows


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def col(rows, name, kind=float):
    return np.array([kind(r[name]) for r in rows])


def test_bundled_scenarios_present():
    assert set(bundled_scenarios()) == {
        "fig_roc1.json", "fig_roc2.json", "fig_roc3_0db.json", "fig_roc3_10db.json",
        "fig_roc_ray.json"}
    for name in bundled_scenarios():
        load_scenario(name)
        load_scenario(name[:-5])


def test_units_resolved_once_at_parse():
    cfg = parse_scenario(BASE)
    assert cfg.snr == pytest.approx(10.0)
    doc = copy.deepcopy(BASE)
    doc["signal"] = {"model": "fixed", "energy_linear": 10.0}
    assert parse_scenario(doc).snr == pytest.approx(10.0)


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d["prior"].update(alpha=1.5),
    lambda d: d["signal"].update(energy_linear=3.0),  # two units at once
    lambda d: d["signal"].pop("energy_db"),
    lambda d: d["sensors"].update(k=2),
    lambda d: d.update(sweep={"snr_db": [1], "snr_linear": [1]}),
    lambda d: d.update(signal={"model": "pmf", "values": [
        {"energy_db": 0, "p": 0.5}, {"energy_db": 3, "p": 0.4}]}),
])
def test_invalid_scenarios_rejected(mutate):
    doc = copy.deepcopy(BASE)
    mutate(doc)
    with pytest.raises(ConfigError):
        parse_scenario(doc)


def test_exit_code_on_schema_violation(tmp_path, capsys):
    doc = copy.deepcopy(BASE)
    doc["prior"]["bogus"] = 1
    code, out, err = run_cli(capsys, "bound", "--scenario", write(tmp_path, doc))
    assert code == 2 and out == "" and "config error" in err


def test_exit_code_on_missing_file(capsys):
    code, _, err = run_cli(capsys, "bound", "--scenario", "/nonexistent/x.json")
    assert code == 2


def test_exit_code_on_bad_override(capsys):
    code, _, _ = run_cli(capsys, "energy-roc", "--scenario", "fig_roc3_0db", "--trials", "10")
    assert code == 2


def test_exit_code_on_numerical_failure(tmp_path, capsys, monkeypatch):
    import rocbound.cli as cli

    def boom(*a, **k):
        raise ArithmeticError("series paths disagree")

    monkeypatch.setattr(cli, "biawgn_mi_asymptotic", boom)
    code, _, err = run_cli(capsys, "asymptotic", "--scenario", write(tmp_path, BASE))
    assert code == 3 and "numerical failure" in err


@pytest.mark.parametrize("name", ["fig_roc1", "fig_roc2", "fig_roc3_0db", "fig_roc_ray"])
def test_dump_config_round_trip(name, tmp_path, capsys):
    code, out, _ = run_cli(capsys, "bound", "--scenario", name, "--dump-config")
    assert code == 0
    echoed = json.loads(out)
    again = parse_scenario(echoed)
    assert again == load_scenario(name)
    assert dump_config(again) == echoed


def test_bound_curve_shape(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "bound", "--scenario", write(tmp_path, BASE))
    assert code == 0
    header, rows = read_csv(out)
    assert any(h.startswith("# generator: rocbound") for h in header)
    assert any(h.startswith("# config: ") for h in header)
    assert any(h.startswith("# mi_bits: ") for h in header)
    pfa, pmd = col(rows, "pfa"), col(rows, "pmd_bound")
    assert np.all(np.diff(pfa) > 0) and np.all(np.diff(pmd) <= 1e-9)
    assert pmd[-1] < 1e-3


def test_bound_warns_when_constraint_never_binds(tmp_path, capsys):
    doc = copy.deepcopy(BASE)
    doc["signal"] = {"model": "fixed", "energy_db": 40}
    code, out, err = run_cli(capsys, "bound", "--scenario", write(tmp_path, doc))
    header, rows = read_csv(out)
    assert code == 0
    assert np.all(col(rows, "pmd_bound") == 0.0)
    assert any(h.startswith("# warning:") for h in header) and "warning" in err


def test_bound_rayleigh_uses_averaged_information(capsys):
    from rocbound.channel_mi import averaged_mi

    code, out, _ = run_cli(capsys, "bound", "--scenario", "fig_roc_ray")
    header, rows = read_csv(out)
    mi = float(rows[0]["mi_bits"])
    cfg = load_scenario("fig_roc_ray")
    assert mi == pytest.approx(averaged_mi(cfg.alpha, cfg.mixture()), abs=1e-14)


def test_csv_is_deterministic(capsys):
    _, a, _ = run_cli(capsys, "bound", "--scenario", "fig_roc1")
    _, b, _ = run_cli(capsys, "bound", "--scenario", "fig_roc1")
    assert a == b


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "o.csv"
    code, out, _ = run_cli(capsys, "equilibrium", "--scenario", "fig_roc2", "--out", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().startswith("# generator")


def test_energy_roc_passes_through_midpoint(tmp_path, capsys):
    doc = copy.deepcopy(BASE)
    doc["signal"] = {"model": "fixed", "energy_db": 0}
    code, out, _ = run_cli(capsys, "energy-roc", "--scenario", write(tmp_path, doc))
    _, rows = read_csv(out)
    pfa, pmd = col(rows, "pfa"), col(rows, "pmd")
    u = 1.0 + 1.0  # kn + snr
    ref_pfa = math.exp(-u)
    from rocbound.special_functions import marcum_q_complement
    ref_pmd = marcum_q_complement(1, math.sqrt(2.0), math.sqrt(2 * u))
    i = np.argmin(np.abs(pfa - ref_pfa))
    assert abs(pfa[i] - ref_pfa) < 0.01
    assert abs(pmd[i] - ref_pmd) < 0.01


def test_energy_roc_kn_ordering(capsys):
    _, out, _ = run_cli(capsys, "energy-roc", "--scenario", "fig_roc3_10db")
    _, rows = read_csv(out)
    kn = col(rows, "kn", int)
    pfa = np.linspace(0.01, 0.9, 50)
    curves = {}
    for k in (1, 10):
        m = kn == k
        order = np.argsort(col(rows, "pfa")[m])
        curves[k] = np.interp(pfa, col(rows, "pfa")[m][order], col(rows, "pmd")[m][order])
    assert np.all(curves[10] > curves[1])


def test_energy_roc_never_below_bound_column(capsys):
    for name in ("fig_roc3_0db", "fig_roc_ray"):
        _, out, _ = run_cli(capsys, "energy-roc", "--scenario", name)
        _, rows = read_csv(out)
        assert np.all(col(rows, "pmd_rule") - col(rows, "pmd_bound") >= -1e-6)


def test_energy_roc_simulation_coverage(capsys):
    code, out, _ = run_cli(capsys, "energy-roc", "--scenario", "fig_roc3_10db", "--simulate")
    assert code == 0
    _, rows = read_csv(out)
    checks = []
    for r in rows:
        for a, lo, hi in (("pfa_rule", "pfa_mc_low", "pfa_mc_high"),
                          ("pmd_rule", "pmd_mc_low", "pmd_mc_high")):
            checks.append(float(r[lo]) <= float(r[a]) <= float(r[hi]))
    assert np.mean(checks) >= 0.95


def test_equilibrium_columns(capsys):
    code, out, _ = run_cli(capsys, "equilibrium", "--scenario", "fig_roc2")
    _, rows = read_csv(out)
    alpha = col(rows, "alpha")
    for a in np.unique(alpha):
        m = alpha == a
        peq = col(rows, "peq")[m]
        assert np.all(np.diff(peq) <= 0)


def test_equilibrium_small_prior_column_approaches_asymptote_at_high_snr(capsys):
    # Known failure: the exp(-snr) form needs alpha * e^(2 snr) << snr, so at
    # alpha = 1e-3 the columns meet near 6 dB and separate again above it.
    code, out, _ = run_cli(capsys, "equilibrium", "--scenario", "fig_roc2")
    _, rows = read_csv(out)
    m = col(rows, "alpha") == 1e-3
    gap = np.abs(np.log(col(rows, "peq")[m]) - np.log(col(rows, "peq_asymptotic")[m]))
    assert gap[-1] < gap[len(gap) // 2]


def test_equilibrium_zero_snr_row(tmp_path, capsys):
    doc = copy.deepcopy(BASE)
    doc["sweep"] = {"what": "equilibrium", "snr_linear": [0, 1, 4]}
    code, out, _ = run_cli(capsys, "equilibrium", "--scenario", write(tmp_path, doc))
    _, rows = read_csv(out)
    assert code == 0 and float(rows[0]["peq"]) == 0.5


def test_asymptotic_columns(tmp_path, capsys):
    doc = copy.deepcopy(BASE)
    doc["sweep"] = {"what": "asymptotic", "snr_db": {"start": 15, "stop": 25, "num": 6},
                    "alphas": [0.5, 0.3]}
    code, out, _ = run_cli(capsys, "asymptotic", "--scenario", write(tmp_path, doc), "--depth", "3")
    assert code == 0
    _, rows = read_csv(out)
    assert all(r["bracket_ok"] == "true" for r in rows)
    assert "partial_3" in rows[0] and "partial_4" not in rows[0]
    alpha = col(rows, "alpha")
    snr = col(rows, "snr_linear")
    slopes = []
    for a in (0.5, 0.3):
        m = alpha == a
        gap = col(rows, "deficit_0")[m]
        # log10 of the leading term: -snr log10(e)/4 - log10(snr)/2 + const
        resid = np.log10(gap) + 0.5 * np.log10(snr[m])
        slopes.append(np.polyfit(snr[m], resid, 1)[0])
    assert slopes[0] == pytest.approx(-math.log10(math.e) / 4, rel=1e-9)
    assert slopes[1] == pytest.approx(slopes[0], rel=1e-9)


def test_asymptotic_rejects_fading(capsys):
    code, _, _ = run_cli(capsys, "asymptotic", "--scenario", "fig_roc_ray")
    assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rocbound", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "rocbound" in res.stdout
