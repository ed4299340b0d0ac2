import pytest

from toda_cells.errors import ConfigError, DomainError
from toda_cells.utils import (
    Deadline,
    Settings,
    Tally,
    detect_config_file,
    expand_vars,
    load_settings,
    parse_subset,
    star_string,
    write_artifact,
)


def test_expand_vars_string():
    assert expand_vars("Hello ${NAME}", {"NAME": "World"}) == "Hello World"
    assert expand_vars("No var here") == "No var here"
    assert expand_vars("${MISSING_TODA_VAR}") == ""
    assert expand_vars("${MISSING_TODA_VAR:-default}") == "default"


def test_expand_vars_list():
    input_list = ["${VAR1}", "static", "${VAR2:-def}"]
    vars = {"VAR1": "val1"}
    assert expand_vars(input_list, vars) == ["val1", "static", "def"]


def test_expand_vars_dict():
    input_dict = {"key1": "${VAR1}", "key2": 3}
    vars = {"VAR1": "val1"}
    assert expand_vars(input_dict, vars) == {"key1": "val1", "key2": 3}


def test_load_settings_from_fixture(fixtures_dir):
    settings = load_settings(fixtures_dir / "settings.yaml", environ={})
    assert settings.budget_seconds == 30
    assert settings.blowup_threshold == 1e6
    assert settings.e8_samples == 50
    assert settings.seed == 7


def test_load_settings_expands_environment(fixtures_dir):
    settings = load_settings(
        fixtures_dir / "settings.yaml", environ={"TODA_TEST_SAMPLES": "12"}
    )
    assert settings.e8_samples == 12


def test_environment_overrides_file(fixtures_dir):
    settings = load_settings(
        fixtures_dir / "settings.yaml",
        environ={"TODA_CELLS_BUDGET": "600", "TODA_CELLS_SEED": "3"},
    )
    assert settings.budget_seconds == 600
    assert settings.seed == 3


def test_defaults_without_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("HOME", str(tmp_path))
    assert load_settings(environ={}) == Settings()


def test_invalid_yaml_raises(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("budget_seconds: [unclosed\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="Invalid YAML"):
        load_settings(bad, environ={})


def test_invalid_value_raises(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("seed: not-a-number\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="Invalid settings"):
        load_settings(bad, environ={})


def test_non_mapping_raises(tmp_path):
    bad = tmp_path / "list.yaml"
    bad.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="mapping"):
        load_settings(bad, environ={})


def test_missing_file_raises(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_settings(tmp_path / "absent.yaml", environ={})


def test_detect_config_prefers_project(tmp_path):
    project = tmp_path / "proj"
    project.mkdir()
    (project / "toda-cells.yaml").write_text("seed: 1\n", encoding="utf-8")

    home = tmp_path / "home"
    user_dir = home / ".config" / "toda-cells"
    user_dir.mkdir(parents=True)
    (user_dir / "config.yaml").write_text("seed: 2\n", encoding="utf-8")

    assert detect_config_file(cwd=project, home=home) == project / "toda-cells.yaml"


def test_detect_config_falls_back_to_user(tmp_path):
    cwd = tmp_path / "cwd"
    cwd.mkdir()
    home = tmp_path / "home"
    user_dir = home / ".config" / "toda-cells"
    user_dir.mkdir(parents=True)
    (user_dir / "config.yaml").write_text("seed: 2\n", encoding="utf-8")

    assert detect_config_file(cwd=cwd, home=home) == user_dir / "config.yaml"
    assert detect_config_file(cwd=cwd, home=tmp_path / "nobody") is None


def test_tally_lines_are_deterministic():
    tally = Tally()
    tally.record("first", "PASS", "1", "1", seconds=0.123456)
    tally.record("second", "SKIP")
    tally.record("third", "FAIL", "2", "3")
    assert tally.lines() == [
        "PASS first: measured=1 expected=1",
        "SKIP second",
        "FAIL third: measured=2 expected=3",
    ]
    assert tally.results[0].seconds == 0.123
    assert tally.count("PASS") == 1
    assert not tally.ok


def test_deadline():
    assert not Deadline(60).expired()
    assert Deadline(0).expired()


def test_write_artifact_creates_parent(tmp_path):
    target = tmp_path / "nested" / "out.txt"
    write_artifact("hello\n", target)
    assert target.read_text(encoding="utf-8") == "hello\n"


def test_star_string():
    assert star_string(set(), 2) == "(**)"
    assert star_string({1}, 3) == "(0**)"
    assert star_string({2, 3}, 3) == "(*00)"


def test_parse_subset():
    assert parse_subset("(*0*)", 3) == frozenset({2})
    assert parse_subset("00", 2) == frozenset({1, 2})
    assert parse_subset("1,3", 3) == frozenset({1, 3})
    assert parse_subset("", 3) == frozenset()
    with pytest.raises(DomainError):
        parse_subset("(*0)", 3)
    with pytest.raises(DomainError):
        parse_subset("4", 3)
    with pytest.raises(DomainError):
        parse_subset("a,b", 3)
