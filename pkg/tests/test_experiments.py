import os

import pandas as pd
import pytest

from src.calculations.complexity import Verdict
from src.components.words import DomainError
from src.experiments import harness
from src.experiments.catalog import CATALOG, ExperimentSpec, get_experiment, list_experiments, select_experiment
from src.experiments.harness import run_experiment, run_many
from src.experiments.report import Findings, combine
from src.experiments.runners import _staircase_zeros
from src.generators.schedule import ScheduleSearchError
from src.integrations.config import Settings

EXPECTED_NAMES = [
    "recurrent-bounds",
    "transitive-bounds",
    "sturmian-exact",
    "morse-hedlund",
    "single-minimal-bound",
    "infinite-minimal-collapse",
    "nonrecurrent-exact",
    "transitive-census",
    "factor-preimage",
    "special-census",
    "staircase-generic",
    "generic-extraction",
]


def test_catalog_names():
    # Act
    names = [spec.name for spec in CATALOG]

    # Assert
    assert names == EXPECTED_NAMES
    assert len(set(names)) == len(names)
    assert list_experiments()["name"].tolist() == EXPECTED_NAMES


EXPECTED_TAGS = [
    "T1.1", "T1.2", "T2.1", "T2.2", "T2.3", "T2.5", "T4.1", "T4.2", "L3.1", "P3.8", "§5-staircase", "T1.4-extract",
]


def test_catalog_tags_and_anchors():
    # Act
    frame = list_experiments()

    # Assert
    assert frame["tag"].tolist() == EXPECTED_TAGS
    assert frame["tag"].is_unique
    assert all(frame["anchor"].str.len() > 0)
    assert frame.set_index("tag").loc["T1.1", "anchor"] == "the following bounds hold and are sharp"


@pytest.mark.parametrize("tag, name", list(zip(EXPECTED_TAGS, EXPECTED_NAMES)))
def test_lookup_by_tag_or_name(tag, name):
    # Act / Assert
    assert get_experiment(tag).name == name
    assert get_experiment(name).tag == tag


def test_select_variant():
    # Act
    spec, overrides = select_experiment("T4.1-i2")
    plain, none = select_experiment("T1.4-extract")

    # Assert
    assert spec.name == "nonrecurrent-exact"
    assert overrides == {"cases": ["i2"]}
    assert plain.name == "generic-extraction"
    assert none == {}
    with pytest.raises(DomainError, match="unknown experiment"):
        select_experiment("T4.1-i3")
    with pytest.raises(DomainError, match="unknown experiment"):
        select_experiment("T2.1-i2")


def test_resolve_applies_overrides_without_touching_defaults():
    # Arrange
    spec = get_experiment("sturmian-exact")

    # Act
    params = spec.resolve({"n_max": 40})

    # Assert
    assert params["n_max"] == 40
    assert params["beta"] == "golden"
    assert spec.defaults["n_max"] == 200


def test_resolve_rejects_unknown_keys():
    # Arrange
    spec = get_experiment("sturmian-exact")

    # Act / Assert
    with pytest.raises(DomainError, match="no parameter 'slope'"):
        spec.resolve({"slope": 0.3})


def test_unknown_experiment():
    # Act / Assert
    with pytest.raises(DomainError, match="unknown experiment"):
        get_experiment("collatz")


def test_morse_hedlund_passes():
    # Act
    bundle = run_experiment(get_experiment("morse-hedlund"), Settings())

    # Assert
    assert bundle.verdict is Verdict.PASS
    assert bundle.exit_code == 0
    assert len(bundle.findings.checks) == 6
    assert set(bundle.findings.traces) == {"classification"}


def test_bundle_files_are_deterministic(tmp_path):
    # Arrange
    spec = get_experiment("morse-hedlund")
    first, second = tmp_path / "a", tmp_path / "b"

    # Act
    left = run_experiment(spec, Settings()).write(str(first))
    right = run_experiment(spec, Settings()).write(str(second))

    # Assert
    files = sorted(os.listdir(left))
    assert files == ["classification.tsv", "provenance.json", "summary.json"]
    assert files == sorted(os.listdir(right))
    for name in files:
        with open(os.path.join(left, name), encoding="utf-8") as a, open(os.path.join(right, name), encoding="utf-8") as b:
            assert a.read() == b.read()


def test_schedule_failure_is_inconclusive(mocker):
    # Arrange
    runner = mocker.Mock(side_effect=ScheduleSearchError("entry needs more than 4096 bits"))
    spec = ExperimentSpec("stub", "a runner that cannot resolve its schedule", {"k": 1}, runner)

    # Act
    bundle = run_experiment(spec, Settings())

    # Assert
    runner.assert_called_once()
    assert bundle.verdict is Verdict.INCONCLUSIVE
    assert bundle.exit_code == 2
    assert "4096 bits" in bundle.findings.checks[0].detail


def test_other_runner_errors_propagate(mocker):
    # Arrange
    runner = mocker.Mock(side_effect=DomainError("bad point"))
    spec = ExperimentSpec("stub", "a runner with a bad point", {}, runner)

    # Act / Assert
    with pytest.raises(DomainError, match="bad point"):
        run_experiment(spec, Settings())


def test_runner_receives_resolved_params(mocker):
    # Arrange
    runner = mocker.Mock()
    spec = ExperimentSpec("stub", "records its params", {"k": 1, "m": 2}, runner)
    settings = Settings()

    # Act
    bundle = run_experiment(spec, settings, {"m": 5})

    # Assert
    params, passed_settings, findings = runner.call_args[0]
    assert params == {"k": 1, "m": 5}
    assert passed_settings is settings
    assert isinstance(findings, Findings)
    assert bundle.verdict is Verdict.INCONCLUSIVE


@pytest.mark.parametrize("jobs", [1, 2])
def test_run_many_keeps_order(mocker, jobs):
    # Arrange
    mocker.patch.object(harness, "run_experiment", side_effect=lambda spec, settings: spec.name)
    names = ["staircase-generic", "morse-hedlund", "sturmian-exact"]

    # Act
    results = run_many(names, Settings(), jobs=jobs)

    # Assert
    assert results == names


def test_combine():
    # Assert
    assert combine([]) is Verdict.INCONCLUSIVE
    assert combine([Verdict.PASS, Verdict.PASS]) is Verdict.PASS
    assert combine([Verdict.PASS, Verdict.INCONCLUSIVE]) is Verdict.INCONCLUSIVE
    assert combine([Verdict.INCONCLUSIVE, Verdict.FAIL, Verdict.PASS]) is Verdict.FAIL


def test_duplicate_trace_names():
    # Arrange
    findings = Findings()
    findings.trace("levels", pd.DataFrame({"n": [1]}))

    # Act / Assert
    with pytest.raises(ValueError, match="duplicate trace"):
        findings.trace("levels", pd.DataFrame({"n": [2]}))


@pytest.mark.parametrize(
    "n, zeros",
    [(1, 1), (3, 1), (4, 2), (6, 4), (10, 4), (10 ** 6, 499849)],
)
def test_staircase_zero_count(n, zeros):
    # Act / Assert
    assert _staircase_zeros(n) == zeros


def test_sturmian_exact_passes():
    # Act
    bundle = run_experiment(get_experiment("sturmian-exact"), Settings(), {"n_max": 40})

    # Assert
    assert bundle.verdict is Verdict.PASS
    assert "sturmian" in bundle.findings.traces


def test_nonrecurrent_exact_passes():
    # Act
    bundle = run_experiment(
        get_experiment("nonrecurrent-exact"), Settings(), {"N": [5], "cases": ["i1"], "n_max": 40}
    )

    # Assert
    assert bundle.verdict is Verdict.PASS
    assert list(bundle.findings.traces) == ["i1-N5"]
    frame = bundle.findings.traces["i1-N5"]
    saturated = frame[frame["saturated"]]
    assert saturated["c"].tolist() == saturated["expected"].tolist()


def test_recurrent_bounds_notes_unreached_generations():
    # Act
    bundle = run_experiment(
        get_experiment("recurrent-bounds"), Settings(), {"j": [2], "growth": ["log2"], "n_max": 40, "stitched": []}
    )

    # Assert
    names = [c.name for c in bundle.findings.checks]
    assert "recurrent-j2-log2: c(n) - 2n tends to infinity" not in names
    assert "recurrent-j2-log2: c(n) <= jn + g(n) at n = n_k^1" in names
    assert any("growth of c(n) - 2n not checked" in note and "next starts at" in note for note in bundle.findings.notes)
    assert any("k = 1..1 only" in note for note in bundle.findings.notes)


def test_recurrent_bounds_growth_read_at_generation_starts():
    # Act
    bundle = run_experiment(
        get_experiment("recurrent-bounds"), Settings(), {"j": [2], "growth": ["sqrt"], "n_max": 200, "stitched": []}
    )

    # Assert
    growth = [c for c in bundle.findings.checks if c.name == "recurrent-j2-sqrt: c(n) - 2n tends to infinity"]
    assert len(growth) == 1
    assert growth[0].verdict is Verdict.PASS
    assert "levels up to 200" in growth[0].detail
    assert growth[0].detail.split("checkpoint margins ")[1].count("'") == 6
