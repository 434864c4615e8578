import math

import pytest

from multiblock import MultiConfig


def test_derived_defaults():
    cfg = MultiConfig.from_rates(22, 2, 3, 3000)
    assert cfg.d == 26
    assert cfg.m == math.ceil(2 * math.log(3000)) == 17
    assert cfg.set_size == 500
    assert cfg.overlap_limit == math.ceil(0.2 * 3000 / 6)
    assert cfg.merge_threshold == pytest.approx(3.0)
    assert cfg.column_offset == pytest.approx(24 / 6000)
    assert cfg.trim_threshold == pytest.approx(20 * 26)
    assert cfg.reserve is True


def test_overrides():
    cfg = MultiConfig.from_rates(22, 2, 3, 3000, set_size=450, m=None)
    assert cfg.set_size == 450
    assert cfg.m == 17
    assert cfg.with_overrides(tol=1e-4).tol == 1e-4
    assert MultiConfig.from_rates(22, 2, 3, 3000, reserve=False).reserve is False


def test_unknown_override_rejected():
    with pytest.raises(ValueError, match='unknown'):
        MultiConfig.from_rates(22, 2, 3, 3000, sets=4)


@pytest.mark.parametrize('a, b, k, n', [(2, 22, 3, 3000), (22, 0, 3, 3000), (22, 2, 1, 3000), (22, 2, 3, 5)])
def test_validation(a, b, k, n):
    with pytest.raises(ValueError):
        MultiConfig.from_rates(a, b, k, n)


def test_positive_counts_required():
    with pytest.raises(ValueError, match='set_size'):
        MultiConfig.from_rates(22, 2, 3, 3000, set_size=0)
