import pytest

from loom.verify import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_each_suite_passes_on_defaults(name):
    params = {"type_label": "A", "rank": 1, "i": 1, "power": 2, "window": 3,
              "t1": 1, "t2": 2, "seeds": 5}
    report = run_suite(name, **params)
    assert report["pass"], report
    assert report["checks"]


def test_suite_aliases():
    report = run_suite("psi-decomposition", type_label="A", rank=1, i=1,
                       power=2, window=3)
    assert report["suite"] == "decompose" and report["pass"]


def test_all_runs_everything():
    report = run_suite("all", type_label="A", rank=1, i=1, power=2, window=3,
                       t1=1, t2=1, seeds=3)
    assert report["pass"]
    assert {r["suite"] for r in report["reports"]} == set(SUITES)


def test_unknown_suite_rejected():
    with pytest.raises(KeyError):
        run_suite("nonsense")
