import pytest

from weaktyp.config import (
    ConfigError,
    defaults,
    fig3_trial_config,
    format_config,
    generic_trial_config,
    load_config,
    oracle_trial_config,
    parse_config,
)


def test_defaults_validate_and_round_trip():
    cfg = defaults()
    text = format_config(cfg)
    assert parse_config(text) == cfg


def test_partial_file_overrides_defaults():
    cfg = parse_config("master_seed = 99\ntrials_per_point = 10\n")
    assert cfg["master_seed"] == 99
    assert cfg["trials_per_point"] == 10
    assert cfg["eps"] == defaults()["eps"]


def test_comments_and_blank_lines():
    cfg = parse_config("# a comment\n\nq = 0.25  # trailing comment\n")
    assert cfg["q"] == 0.25


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config("qq = 0.5\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("q = 0.5\nq = 0.6\n")


def test_malformed_line_rejected():
    with pytest.raises(ConfigError, match="key = value"):
        parse_config("just some words\n")


def test_unparseable_value_names_key():
    with pytest.raises(ConfigError, match="'q'"):
        parse_config("q = banana\n")


def test_domain_error_names_field():
    with pytest.raises(ConfigError, match="q:"):
        parse_config("q = 0\n")
    with pytest.raises(ConfigError, match="fig3_q_values:"):
        parse_config("fig3_q_values = 0.5,0.2\n")
    with pytest.raises(ConfigError, match="channel_p:"):
        parse_config("channel_p = 1.5\n")
    with pytest.raises(ConfigError, match="resolver:"):
        parse_config("resolver = magic\n")


def test_full_profile_swaps_blocklength_defaults():
    cfg = parse_config("profile = full\n")
    assert cfg["fig3_blocklengths"][-1] == 600
    assert cfg["fig12_blocklengths"][-1] == 600
    # explicit keys beat the profile
    cfg = parse_config("profile = full\nfig3_blocklengths = 10,20\n")
    assert cfg["fig3_blocklengths"] == [10, 20]


def test_list_parsing():
    cfg = parse_config("fig12_blocklengths = 5, 10 ,15\n")
    assert cfg["fig12_blocklengths"] == [5, 10, 15]


def test_trial_config_builders():
    cfg = defaults()
    oracle = oracle_trial_config(cfg)
    assert oracle.codebook_mode == "fixed"
    assert oracle.n == 6 and oracle.m == 2
    generic = generic_trial_config(cfg)
    assert generic.n == cfg["n"]
    fig3 = fig3_trial_config(cfg)
    assert float(fig3.channel.transition[0, 1]) == 0.4
    assert fig3.eps == cfg["fig3_eps"]


def test_load_config_missing_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/path.cfg")


def test_load_config_none_gives_defaults():
    assert load_config(None) == defaults()
