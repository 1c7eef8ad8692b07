"""Experiment layer: config grammar, histogram measurement and caching,
sweep determinism, and the command-line entry points."""

import io

import numpy as np
import pytest

from qkdleak.cli import main
from qkdleak.core import binary_entropy
from qkdleak.experiment import (
    CSV_HEADER,
    MEASURED,
    NORMALIZED_F1,
    ConfigError,
    ExperimentConfig,
    load_histogram,
    measure_histogram,
    parse_config,
    run_sweep,
    save_histogram,
    write_sweep_csv,
)

BB84_TEXT = """
protocol = decoy-bb84
mu = 0.4
nu1 = 0.1
nu2 = 0.0007
q = 0.9
alpha = 0.20
d = 1e-5
eta_d = 0.20
e_det = 0.033
distances = 0, 50, 100
n_bits = 10000
seeds = 1
histogram_mode = normalized-f1
"""

SNS_TEXT = """
protocol = sns-tf
pz_a = 0.7
pz_b = 0.8
eps_a = 0.022
eps_b = 0.48
mu_a = 0.042
mu_b = 0.425
e_d = 0.05
alpha = 0.20
d = 1e-10
eta_d = 0.50
delta_multi_normalized = true
distances = 100:300:100
n_bits = 10000
"""


# --- config grammar ---------------------------------------------------------


def test_parse_bb84_config():
    cfg = parse_config(BB84_TEXT)
    assert cfg.protocol == "decoy-bb84"
    assert cfg.distances == (0.0, 50.0, 100.0)
    assert cfg.n_bits == 10_000
    assert cfg.seeds == (1,)
    assert cfg.histogram_mode == NORMALIZED_F1
    assert cfg.params.mu == 0.4
    assert cfg.params.dark_rate == 1e-5


def test_parse_sns_config_with_range_grid_and_probe_defaults():
    cfg = parse_config(SNS_TEXT)
    assert cfg.distances == (100.0, 200.0, 300.0)
    assert cfg.delta_multi_normalized is True
    assert cfg.histogram_mode == MEASURED  # default
    assert cfg.params.mu_a1 == cfg.params.mu_a  # probes fall back to signal
    assert cfg.params.mu_b2 == 2 * cfg.params.mu_b


def test_config_error_is_a_value_error():
    assert issubclass(ConfigError, ValueError)


@pytest.mark.parametrize(
    "mutation,needle",
    [
        (lambda t: t.replace("protocol = decoy-bb84", ""), "protocol"),
        (lambda t: t + "\nbogus_key = 3\n", "bogus_key"),
        (lambda t: t.replace("mu = 0.4\n", ""), "mu"),
        (lambda t: t + "\nmu = 0.5\n", "mu"),  # duplicate
        (lambda t: t.replace("n_bits = 10000", "n_bits = 100"), "n_bits"),
        (lambda t: t.replace("distances = 0, 50, 100", "distances = 50, 10"), "distances"),
        (lambda t: t.replace("seeds = 1", "seeds = x"), "seeds"),
    ],
)
def test_config_errors_name_the_offender(mutation, needle):
    with pytest.raises(ConfigError) as err:
        parse_config(mutation(BB84_TEXT))
    assert needle in str(err.value)


def test_distances_range_is_inclusive_of_stop():
    cfg = parse_config(BB84_TEXT.replace("distances = 0, 50, 100", "distances = 0:10:2.5"))
    assert cfg.distances == (0.0, 2.5, 5.0, 7.5, 10.0)


def test_distances_rejects_bad_step():
    with pytest.raises(ConfigError):
        parse_config(BB84_TEXT.replace("distances = 0, 50, 100", "distances = 0:10:0"))


def test_unknown_protocol_rejected():
    with pytest.raises(ConfigError) as err:
        parse_config(BB84_TEXT.replace("decoy-bb84", "e91"))
    assert "protocol" in str(err.value)


def test_sns_keys_rejected_in_bb84_config():
    with pytest.raises(ConfigError) as err:
        parse_config(BB84_TEXT + "\npz_a = 0.5\n")
    assert "pz_a" in str(err.value)


# --- histogram measurement ---------------------------------------------------


def test_normalized_histogram_total_identity():
    qber = 0.05
    hist = measure_histogram(qber, 10_000, (3,), NORMALIZED_F1)
    assert hist.total() == pytest.approx(10_000 * binary_entropy(qber), rel=1e-12)


def test_measured_histogram_total_is_integral():
    hist = measure_histogram(0.05, 10_000, (3,), MEASURED)
    assert hist.total() == int(hist.total())
    assert hist.total() >= 10_000 * binary_entropy(0.05)  # above the Shannon limit


def test_histogram_depends_only_on_quantized_qber():
    a = measure_histogram(0.0500049, 10_000, (1,))
    b = measure_histogram(0.05, 10_000, (1,))
    assert a.counts == b.counts


def test_cache_is_transparent():
    cache: dict = {}
    first = measure_histogram(0.03, 10_000, (1, 2), NORMALIZED_F1, cache=cache)
    again = measure_histogram(0.03, 10_000, (1, 2), NORMALIZED_F1, cache=cache)
    fresh = measure_histogram(0.03, 10_000, (1, 2), NORMALIZED_F1)
    assert again is first  # served from the cache
    assert fresh.counts == first.counts  # and bit-identical without it
    assert len(cache) == 1


def test_histogram_rejects_out_of_range_qber():
    with pytest.raises(ValueError):
        measure_histogram(0.0, 10_000, (1,))
    with pytest.raises(ValueError):
        measure_histogram(0.5, 10_000, (1,))


def test_histogram_save_load_round_trip():
    hist = measure_histogram(0.04, 10_000, (1, 5), NORMALIZED_F1)
    buf = io.StringIO()
    save_histogram(hist, buf, qber=0.04, mode=NORMALIZED_F1, seeds=(1, 5))
    buf.seek(0)
    loaded, qber, mode, seeds = load_histogram(buf)
    assert qber == 0.04
    assert mode == NORMALIZED_F1
    assert seeds == (1, 5)
    assert loaded.n == hist.n
    assert loaded.counts == hist.counts  # repr round-trip is exact


# --- sweeps -------------------------------------------------------------------


def test_sweep_rows_follow_the_channel_model():
    from qkdleak.decoy_bb84 import simulate_observables

    cfg = parse_config(BB84_TEXT)
    rows = run_sweep(cfg)
    assert [r.distance_km for r in rows] == [0.0, 50.0, 100.0]
    for row in rows:
        obs = simulate_observables(cfg.params, row.distance_km)
        assert row.qber == pytest.approx(obs.e_mu, rel=1e-12)
        assert row.r_improved >= row.r_original


def test_sweep_csv_is_byte_identical_across_runs():
    cfg = parse_config(SNS_TEXT)
    out1, out2 = io.StringIO(), io.StringIO()
    write_sweep_csv(run_sweep(cfg), out1)
    write_sweep_csv(run_sweep(cfg), out2)
    assert out1.getvalue() == out2.getvalue()
    assert out1.getvalue().splitlines()[0] == CSV_HEADER


def test_sweep_survives_dark_count_dominated_points():
    # far beyond cutoff the error rate saturates; rates must come back 0
    cfg = parse_config(SNS_TEXT.replace("distances = 100:300:100", "distances = 1200"))
    (row,) = run_sweep(cfg)
    assert row.r_original == 0.0
    assert row.r_improved == 0.0


# --- command line ---------------------------------------------------------------


def test_cli_sweep_writes_csv(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(BB84_TEXT)
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--config", str(config), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4


def test_cli_seed_override_changes_measured_output(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(BB84_TEXT.replace("normalized-f1", "measured"))
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(["sweep", "--config", str(config), "--out", str(out_a)]) == 0
    assert main(["sweep", "--config", str(config), "--out", str(out_b), "--seed", "99"]) == 0
    assert out_a.read_text() != out_b.read_text()


def test_cli_reports_bad_config_as_exit_2(tmp_path, capsys):
    config = tmp_path / "exp.cfg"
    config.write_text(BB84_TEXT + "\nwhatever = 1\n")
    assert main(["sweep", "--config", str(config)]) == 2
    assert "whatever" in capsys.readouterr().err


def test_cli_missing_config_file_is_exit_2(tmp_path):
    assert main(["sweep", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_cli_histogram_subcommand_round_trips(tmp_path):
    out = tmp_path / "hist.txt"
    code = main(
        ["histogram", "--qber", "0.05", "--n-bits", "10000", "--seed", "2", "--out", str(out)]
    )
    assert code == 0
    with out.open() as fh:
        hist, qber, mode, seeds = load_histogram(fh)
    assert qber == 0.05
    assert seeds == (2,)
    assert hist.total() > 0
