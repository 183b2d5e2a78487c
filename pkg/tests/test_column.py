import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tnnsim import rng
from tnnsim.column import (
    Column,
    ColumnConfig,
    ColumnState,
    body_potentials,
    column_gamma_cycle,
    column_gamma_cycle_ticks,
    initial_state,
    neuron_body_step,
    wta_inhibit,
)
from tnnsim.errors import DimensionError
from tnnsim.temporal import INF


def brute_fire_times(weights, times, threshold, gamma):
    """Per-tick loop over RNL response bits; deliberately naive."""
    p, q = weights.shape
    fired = [INF] * q
    for j in range(q):
        acc = 0
        for k in range(gamma):
            for i in range(p):
                t = times[i]
                if t != INF and t <= k < t + weights[i, j]:
                    acc += 1
            if acc >= threshold:
                fired[j] = k
                break
    return fired


def forced(p, q, **kw):
    kw.setdefault("threshold", 1)
    return ColumnConfig(p=p, q=q, stabilization_probs=(1.0,) * 8, case_probs=(1, 1, 1, 1), **kw)


# -- neuron body -----------------------------------------------------------------


def test_body_step_examples():
    assert neuron_body_step([1, 1, 1, 1], 0, 4) == (4, True)
    assert neuron_body_step([0, 0, 0, 0], 3, 8) == (3, False)
    assert neuron_body_step([1], 7, 4, already_fired=True) == (8, False)


def test_body_two_ramps_fire_at_tick_2():
    w = np.array([[3], [2]])
    times = np.array([0.0, 0.0])
    pot = body_potentials(w, times, 16)
    assert pot[:4, 0].tolist() == [2, 4, 5, 5]
    assert brute_fire_times(w, [0, 0], 5, 16) == [2]
    cfg = ColumnConfig(p=2, q=1, threshold=5, learning_enabled=False)
    _, out = column_gamma_cycle(cfg, ColumnState(w), [0, 0])
    assert out.spike_times == (2,)


# -- WTA ---------------------------------------------------------------------------


def test_wta_examples():
    out = wta_inhibit([5, 3, 9])
    assert out.winner == 1 and out.spike_times == (INF, 3, INF)
    out = wta_inhibit([4, 4])
    assert out.winner == 0 and out.spike_times == (4, INF)
    out = wta_inhibit([INF, INF])
    assert out.winner is None and out.spike_times == (INF, INF)
    with pytest.raises(DimensionError):
        wta_inhibit([])


@given(st.lists(st.one_of(st.just(INF), st.integers(0, 63)), min_size=1, max_size=12))
def test_wta_matches_brute_min(times):
    out = wta_inhibit(times)
    finite = [t for t in times if t != INF]
    if not finite:
        assert out.winner is None
    else:
        assert out.winner == times.index(min(finite))
    assert sum(t != INF for t in out.spike_times) == (1 if finite else 0)


# -- full gamma cycle ------------------------------------------------------------------


def test_all_inf_inputs_no_spike_no_change():
    cfg = ColumnConfig(p=4, q=3, threshold=2)
    st0 = initial_state(cfg)
    st1, out = column_gamma_cycle(cfg, st0, [INF] * 4)
    assert out.winner is None
    assert np.array_equal(st0.weights, st1.weights)
    assert st1.gamma_index == 1


def test_single_synapse_fires_at_tick_0():
    cfg = ColumnConfig(p=1, q=1, threshold=1, initial_weight=7, learning_enabled=False)
    _, out = column_gamma_cycle(cfg, initial_state(cfg), [0])
    assert out.spike_times == (0,) and out.winner == 0


def test_forced_brv_causal_synapse_increments_by_one():
    cfg = forced(2, 2, threshold=3, initial_weight=3)
    st0 = initial_state(cfg)
    st1, out = column_gamma_cycle(cfg, st0, [0, INF])
    assert out.winner == 0 and out.spike_times[0] == 2
    assert st1.weights[0, 0] == 4  # input 0 before winner's output: case 0
    assert st1.weights[1, 0] == 2  # no input, output present: case 3
    assert st1.weights[0, 1] == 4  # input only (loser sees INF): case 2
    assert st1.weights[1, 1] == 3  # neither: unchanged


def test_dimension_mismatch():
    cfg = ColumnConfig(p=3, q=2, threshold=1)
    with pytest.raises(DimensionError):
        column_gamma_cycle(cfg, initial_state(cfg), [0, 1])
    with pytest.raises(DimensionError):
        column_gamma_cycle_ticks(cfg, initial_state(cfg), [0, 1])


def test_config_invariants():
    for kw in ({"p": 0}, {"q": 0}, {"threshold": 0}, {"gamma_period_ticks": 15}, {"initial_weight": 8}):
        args = {"p": 2, "q": 2, "threshold": 1, **kw}
        with pytest.raises(ValueError):
            ColumnConfig(**args)
    with pytest.raises(ValueError, match="p ≥ 1"):
        ColumnConfig(p=0, q=1, threshold=1)
    with pytest.raises(ValueError):
        ColumnConfig(p=1, q=1, threshold=1, stabilization_probs=(0.5,) * 7)
    assert len(ColumnConfig(p=1, q=1, threshold=1, weight_bits=4, gamma_period_ticks=32).stabilization_probs) == 16


times_st = st.one_of(st.just(INF), st.integers(0, 31))


@settings(max_examples=60, deadline=None)
@given(
    p=st.integers(1, 5),
    q=st.integers(1, 4),
    threshold=st.integers(1, 20),
    seed=st.integers(0, 2**16),
    data=st.data(),
)
def test_vectorised_matches_tick_reference(p, q, threshold, seed, data):
    cfg = ColumnConfig(p=p, q=q, threshold=threshold, gamma_period_ticks=32, seed=seed)
    state = initial_state(cfg)
    for _ in range(3):
        x = data.draw(st.lists(times_st, min_size=p, max_size=p))
        fast_state, fast = column_gamma_cycle(cfg, state, x)
        ref_state, ref = column_gamma_cycle_ticks(cfg, state, x)
        assert fast.spike_times == ref.spike_times
        assert fast.pre_wta_times == ref.pre_wta_times
        assert fast.pre_wta_times == tuple(brute_fire_times(state.weights, x, threshold, 32))
        assert np.array_equal(fast.body_potentials, ref.body_potentials)
        assert np.array_equal(fast_state.weights, ref_state.weights)
        state = fast_state


def test_ramp_truncated_at_cycle_end_restores_weight():
    cfg = ColumnConfig(p=1, q=1, threshold=100, initial_weight=7, gamma_period_ticks=16, learning_enabled=False)
    st1, out = column_gamma_cycle_ticks(cfg, initial_state(cfg), [13])
    assert out.body_potentials[-1, 0] == 3
    assert st1.weights[0, 0] == 7


def random_inputs(g, p, present=0.7, span=8):
    t = g.integers(0, span, p)
    return [int(v) if m else INF for v, m in zip(t, g.random(p) < present)]


def test_column_invariants_random_cycles():
    cfg = ColumnConfig(p=16, q=4, threshold=12, seed=5)
    col = Column(cfg)
    g = rng.stream(11, rng.DATA)
    for c in range(300):
        x = [INF] * 16 if c % 10 == 0 else random_inputs(g, 16)
        before = col.weights.copy()
        out = col.step(x)
        assert sum(t != INF for t in out.spike_times) <= 1
        delta = col.weights - before
        assert np.abs(delta).max() <= 1
        if c % 10 == 0:
            assert not delta.any()
        assert col.weights.min() >= 0 and col.weights.max() <= 7


@settings(max_examples=80, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    i=st.integers(0, 5),
    j=st.integers(0, 2),
    threshold=st.integers(1, 30),
    data=st.data(),
)
def test_monotone_in_weight(seed, i, j, threshold, data):
    cfg = ColumnConfig(p=6, q=3, threshold=threshold, seed=seed, learning_enabled=False)
    st0 = initial_state(cfg)
    if st0.weights[i, j] == 7:
        return
    x = data.draw(st.lists(times_st, min_size=6, max_size=6))
    _, before = column_gamma_cycle(cfg, st0, x)
    w = st0.weights.copy()
    w[i, j] += 1
    _, after = column_gamma_cycle(cfg, ColumnState(w), x)
    assert after.pre_wta_times[j] <= before.pre_wta_times[j]


def test_determinism():
    cfg = ColumnConfig(p=8, q=3, threshold=8, seed=42)

    def trajectory():
        col = Column(cfg)
        g = rng.stream(1, rng.DATA)
        ws = []
        for _ in range(50):
            col.step(random_inputs(g, 8))
            ws.append(col.weights.copy())
        return ws

    assert all(np.array_equal(a, b) for a, b in zip(trajectory(), trajectory()))


def test_learn_override():
    cfg = forced(2, 1, initial_weight=3)
    st1, _ = column_gamma_cycle(cfg, initial_state(cfg), [0, 0], learn=False)
    assert (st1.weights == 3).all()
