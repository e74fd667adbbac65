"""The named verification suites at reduced sizes."""

from __future__ import annotations

import pytest

from plancut.errors import PreconditionViolated
from plancut.suites import SUITES, SuiteResult, run_suite


def test_registry_rejects_unknown_names() -> None:
    with pytest.raises(PreconditionViolated, match="horoscope"):
        run_suite("horoscope")
    assert sorted(SUITES) == ["decoupling", "duality", "ldd", "lp-marginals", "patch"]


@pytest.mark.parametrize(
    "name,params",
    [
        ("duality", {"max_edges": 6}),
        ("decoupling", {"samples": 20_000}),
        ("ldd", {"per_seed": 200}),
        ("patch", {}),
        ("lp-marginals", {"samples": 4000}),
    ],
)
def test_suites_pass_at_reduced_size(name, params) -> None:
    res = run_suite(name, **params)
    assert isinstance(res, SuiteResult)
    assert res.passed, res.text()
    assert res.text().startswith(f"suite {name}: PASS")


def test_reports_are_reproducible() -> None:
    a = run_suite("ldd", per_seed=100).text()
    b = run_suite("ldd", per_seed=100).text()
    assert a == b


def test_patch_battery_meets_the_size_contract() -> None:
    from plancut.suites import patch_fixture_battery

    battery = patch_fixture_battery()
    assert len(battery) >= 20
    assert all(g.n <= 12 for _, g in battery)
    assert all(g.total_demand() > 0 for _, g in battery)
