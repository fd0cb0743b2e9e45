import pytest

from incidence4d.constructions import (choose_elekes_params, elekes2d, elekes3d, elekes4d,
                                       hyperplane_packing)
from incidence4d.errors import ResourceLimitError
from incidence4d.geom import incidence_count


def _measure(cfg):
    c = incidence_count(cfg, method="grouped")
    return cfg.m, cfg.n, c.total, set(c.per_line)


@pytest.mark.parametrize("k, l, expected", [(2, 1, (128, 8, 16)), (3, 2, (5184, 1728, 5184)), (1, 1, (8, 1, 1))])
def test_elekes4d_examples(k, l, expected):
    cfg, pred = elekes4d(k, l)
    m, n, I, per_line = _measure(cfg)
    assert (m, n, I) == expected == (pred.m, pred.n, pred.I)
    assert per_line == {k}


@pytest.mark.parametrize("k, l, expected", [(2, 1, (32, 4, 8)), (1, 1, (4, 1, 1)), (2, 2, (128, 64, 128))])
def test_elekes3d_examples(k, l, expected):
    cfg, pred = elekes3d(k, l)
    assert _measure(cfg)[:3] == expected == (pred.m, pred.n, pred.I)


@pytest.mark.parametrize("k, l, expected", [(2, 2, (16, 8, 16)), (1, 1, (2, 1, 1)), (3, 1, (18, 3, 9))])
def test_elekes2d_examples(k, l, expected):
    cfg, pred = elekes2d(k, l)
    assert _measure(cfg)[:3] == expected == (pred.m, pred.n, pred.I)


def test_packing_examples():
    cfg, pred = hyperplane_packing(2, 2, 1)
    assert _measure(cfg)[:3] == (64, 8, 16) and pred.q_claim == "4"
    assert _measure(hyperplane_packing(3, 2, 1)[0])[:3] == (96, 12, 24)
    for k, l in ((1, 1), (2, 1), (2, 2)):
        assert _measure(hyperplane_packing(1, k, l)[0]) == _measure(elekes3d(k, l)[0])


@pytest.mark.parametrize("gen, args", [(elekes4d, (2, 2)), (elekes3d, (3, 2)), (elekes2d, (3, 3)),
                                       (hyperplane_packing, (2, 2, 2))])
def test_generated_configs_are_distinct_and_tight(gen, args):
    cfg, pred = gen(*args)
    assert len(set(cfg.points)) == cfg.m and len(set(cfg.lines)) == cfg.n
    m, n, I, per_line = _measure(cfg)
    assert I == pred.I == pred.per_line * n
    assert per_line == {pred.per_line}


def test_leading_ratio_is_scale_invariant():
    for k in range(1, 5):
        for l in range(1, 4):
            _, pred = elekes4d(k, l, cap=10 ** 12)
            assert pred.I / (pred.m ** 0.4 * pred.n ** 0.8) == pytest.approx(8 ** -0.4, abs=1e-12)


def test_resource_guard():
    with pytest.raises(ResourceLimitError):
        elekes4d(4, 3, cap=1000)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        elekes4d(0, 1)
    with pytest.raises(ValueError):
        hyperplane_packing(0, 1, 1)


def test_parameter_inversion_recovers_exact_sizes():
    for k, l in ((2, 1), (3, 2), (5, 3)):
        m, n = 8 * k ** 4 * l ** 3, k ** 3 * l ** 6
        assert choose_elekes_params(m, n) == (k, l)
