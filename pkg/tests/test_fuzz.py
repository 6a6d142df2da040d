import pytest

from perispec import codec, fuzz


def test_battery_passes_and_is_deterministic():
    cfg = fuzz.RunConfig(seed=3, trials=8, max_dim=4)
    ok, first = fuzz.run(cfg)
    _, second = fuzz.run(cfg)
    assert ok
    assert codec.dumps(first) == codec.dumps(second)
    assert [p["name"] for p in first["properties"]] == [name for name, _ in fuzz.BATTERY]
    assert all(p["count"] == 8 for p in first["properties"])


def test_tiny_tolerance_is_flagged():
    ok, summary = fuzz.run(fuzz.RunConfig(seed=1, tol=1e-30, trials=4, max_dim=3))
    assert not ok
    failing = [p for p in summary["properties"] if not p["passed"]]
    assert failing and all(p["tolerance_induced"] for p in failing)
    assert all(p["counterexample"] is not None for p in failing)


@pytest.mark.parametrize(
    "kwargs", [{"seed": -1}, {"tol": 0.0}, {"trials": 0}, {"max_dim": 1}]
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        fuzz.RunConfig(**kwargs)
