import copy

import numpy as np
import pytest

from gainhmm import build_hmm

# Two-state two-color fixture used throughout; all four length-2 state
# paths have distinct probabilities, so decoder disagreements are visible.
T1_SPEC = {
    "alphabet": ["x", "y"],
    "colors": [{"id": 0, "name": "A"}, {"id": 1, "name": "B"}],
    "states": [
        {"id": "s_A", "color": 0, "emission": {"x": 0.9, "y": 0.1}},
        {"id": "s_B", "color": 1, "emission": {"x": 0.2, "y": 0.8}},
    ],
    "initial": {"s_A": 0.5, "s_B": 0.5},
    "transitions": {
        "s_A": {"s_A": 0.9, "s_B": 0.1},
        "s_B": {"s_A": 0.2, "s_B": 0.8},
    },
}

ONE_STATE_SPEC = {
    "alphabet": ["x"],
    "colors": [{"id": 0, "name": "only"}],
    "states": [{"id": "s", "color": 0, "emission": {"x": 1.0}}],
    "initial": {"s": 1.0},
    "transitions": {"s": {"s": 1.0}},
}


def t1_spec():
    return copy.deepcopy(T1_SPEC)


@pytest.fixture
def t1():
    return build_hmm(t1_spec())


@pytest.fixture
def one_state():
    return build_hmm(copy.deepcopy(ONE_STATE_SPEC))


def random_model(rng, n_states, n_colors, n_symbols=2, sparsity=0.0):
    """Random valid model; the first n_colors states cover every color.

    sparsity zeroes a fraction of transition entries (keeping rows
    stochastic), which makes the ColorGraph non-trivial.
    """
    assert n_states >= n_colors
    colors = list(range(n_colors))
    colors += [int(rng.integers(n_colors)) for _ in range(n_states - n_colors)]
    trans = rng.dirichlet(np.ones(n_states), size=n_states)
    if sparsity > 0.0:
        mask = rng.random((n_states, n_states)) < sparsity
        keep_one = rng.integers(n_states, size=n_states)
        mask[np.arange(n_states), keep_one] = False
        trans = np.where(mask, 0.0, trans)
        trans /= trans.sum(axis=1, keepdims=True)
    emis = rng.dirichlet(np.ones(n_symbols), size=n_states)
    init = rng.dirichlet(np.ones(n_states))
    symbols = [chr(ord("a") + i) for i in range(n_symbols)]
    spec = {
        "alphabet": symbols,
        "colors": [{"id": c, "name": f"c{c}"} for c in range(n_colors)],
        "states": [
            {"id": f"s{i}", "color": colors[i],
             "emission": {s: float(p) for s, p in zip(symbols, emis[i])}}
            for i in range(n_states)
        ],
        "initial": {f"s{i}": float(p) for i, p in enumerate(init)},
        "transitions": {
            f"s{i}": {f"s{j}": float(p) for j, p in enumerate(trans[i])}
            for i in range(n_states)
        },
    }
    return build_hmm(spec)


def random_seq(rng, alphabet, length):
    return "".join(alphabet[i] for i in rng.integers(len(alphabet), size=length))
