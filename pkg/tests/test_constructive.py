import pytest
from hypothesis import given

from rainbow import (
    Augmented,
    Exhausted,
    Instance,
    InvalidState,
    Layer,
    LayerState,
    NotBipartite,
    RainbowMatching,
    augment_once,
    brute_force_max_rainbow,
    check_counting_certificate,
    drisko_instance,
    find_rainbow,
    greedy_rainbow,
    guaranteed_k,
    is_rainbow_matching,
    max_rainbow,
    random_instance,
    RandomModel,
    remark_general_instance,
    theorem_bound,
)
from rainbow.constructive import TargetOutOfRange, path_is_well_formed

from conftest import bipartite_instances


def test_empty_matching_augments_directly():
    inst = drisko_instance(3)
    out = augment_once(inst, RainbowMatching())
    assert isinstance(out, Augmented)
    assert len(out.matching) == 1
    assert out.path.remove == ()
    assert out.path.labels == (1,)


def test_drisko3_maximum_is_exhausted():
    inst = drisko_instance(3)
    rm = greedy_rainbow(inst)
    assert len(rm) == brute_force_max_rainbow(inst) == 2
    out = augment_once(inst, rm)
    assert isinstance(out, Exhausted)
    N, n, t = inst.N, inst.n, 2
    assert (N - t) * (n - t) == 2 <= t
    assert check_counting_certificate(inst, out.state, t)
    state = out.state
    assert state.free_a == {2} and state.free_b == {2}
    assert [(L.color, L.F, L.B, L.A) for L in state.layers] == [
        (2, ((2, 1),), {1}, {1}),
        (3, ((1, 0), (2, 1)), {0}, {0}),
    ]


TWO_LAYER = Instance.bipartite(2, 2, 2, [
    [(0, 0), (1, 1)],
    [(0, 0), (1, 1)],
    [(0, 1), (1, 0)],
])


def test_two_layer_path():
    rm = RainbowMatching.of([(2, (0, 1))])
    assert brute_force_max_rainbow(TWO_LAYER) == 2
    out = augment_once(TWO_LAYER, rm)
    assert isinstance(out, Augmented)
    assert out.matching == RainbowMatching.of([(1, (0, 0)), (0, (1, 1))])
    assert out.path.add == ((1, (0, 0)), (0, (1, 1)))
    assert out.path.remove == ((2, (0, 1)),)
    assert out.path.labels == (2, 1)
    assert [str(v) for v in out.path.walk] == ["b0", "a0", "b1", "a1"]
    assert path_is_well_formed(out.path, rm, out.matching, TWO_LAYER)


def test_errors():
    with pytest.raises(NotBipartite):
        augment_once(remark_general_instance(2), RainbowMatching())
    with pytest.raises(NotBipartite):
        find_rainbow(remark_general_instance(2))
    with pytest.raises(InvalidState):
        augment_once(TWO_LAYER, RainbowMatching.of([(0, (0, 0)), (1, (0, 0))]))
    with pytest.raises(InvalidState):
        augment_once(TWO_LAYER, RainbowMatching.of([(0, (0, 0)), (1, (1, 1))]))
    for bad in (0, 3):
        with pytest.raises(TargetOutOfRange):
            find_rainbow(TWO_LAYER, bad)


def test_find_rainbow_forced():
    res = find_rainbow(Instance.bipartite(1, 1, 1, [[(0, 0)]]), 1)
    assert res.size == 1 and res.met_target and res.steps == 0


def test_find_rainbow_drisko4():
    inst = drisko_instance(4)
    assert inst.N == 6
    res = find_rainbow(inst, 4)
    assert not res.met_target
    assert res.size == 3 == max_rainbow(inst).size
    assert res.exhausted is not None
    assert check_counting_certificate(inst, res.exhausted.state, 3)


def test_find_rainbow_drisko_bound_seed():
    inst = random_instance(RandomModel.square(4, 7, seed=11))
    res = find_rainbow(inst, 4)
    assert res.met_target
    assert max_rainbow(inst).size == 4


def test_default_target():
    inst = drisko_instance(5)
    res = find_rainbow(inst)
    assert res.target == 5 - guaranteed_k(5, inst.N)
    assert res.met_target


def test_fast_path_when_greedy_suffices():
    res = find_rainbow(TWO_LAYER, 2, trace=True)
    assert res.steps == 0 and res.trace == []


def test_trace_records_steps():
    inst = random_instance(RandomModel.square(5, 9, seed=3))
    res = find_rainbow(inst, 5, trace=True, start=RainbowMatching())
    assert res.met_target
    assert len(res.trace) == res.steps == 5
    for entry in res.trace:
        assert entry["outcome"] == "augmented"
        path = entry["path"]
        assert len(path["add"]) == len(path["remove"]) + 1
        assert len(entry["state"]["layers"]) + 1 >= path["add"][0]["layer"]


def _layer_state(layers, free_a, free_b, partner, t, n=2, unused=None):
    return LayerState(
        n=n, t=t, partner=partner, free_a=frozenset(free_a), free_b=frozenset(free_b),
        unused=tuple(unused if unused is not None else [L.color for L in layers]),
        layers=layers,
    )


def test_certificate_rejects_overlapping_b_sets():
    inst = drisko_instance(3)
    good = augment_once(inst, greedy_rainbow(inst)).state
    first, second = good.layers
    # B_2 = B_1 = {b1}; b1 is an endpoint of F_2, so only disjointness fails
    clash = Layer(2, second.color, second.F, first.B, first.A)
    bad = _layer_state([first, clash], good.free_a, good.free_b, good.partner, t=2, n=3)
    assert not check_counting_certificate(inst, bad, 2)


def test_certificate_rejects_property1_violation():
    inst = drisko_instance(3)
    out = augment_once(inst, greedy_rainbow(inst))
    good = out.state
    assert check_counting_certificate(inst, good, 2)
    # the last layer now touches the free B-vertex b2
    bad_layer = Layer(2, 3, ((0, 2), (1, 0)), frozenset({0}), frozenset({0}))
    bad = _layer_state([good.layers[0], bad_layer], good.free_a, good.free_b,
                       good.partner, t=2, n=3)
    assert not check_counting_certificate(inst, bad, 2)


def test_certificate_rejects_wrong_t_or_missing_layers():
    inst = drisko_instance(3)
    state = augment_once(inst, greedy_rainbow(inst)).state
    assert not check_counting_certificate(inst, state, 1)
    short = _layer_state(state.layers[:1], state.free_a, state.free_b, state.partner,
                         t=2, n=3, unused=state.unused)
    assert not check_counting_certificate(inst, short, 2)


@given(bipartite_instances(max_n=5, max_N=9))
def test_augment_soundness(inst):
    rm = RainbowMatching()
    while len(rm) < inst.n:
        out = augment_once(inst, rm)
        if isinstance(out, Exhausted):
            assert check_counting_certificate(inst, out.state, len(rm))
            assert inst.N < theorem_bound(inst.n, inst.n - 1 - len(rm))
            break
        assert path_is_well_formed(out.path, rm, out.matching, inst)
        assert len(out.path.add) == len(out.path.remove) + 1
        rm = out.matching


@given(bipartite_instances(max_n=5, max_N=9))
def test_find_rainbow_guarantee_and_dominance(inst):
    res = find_rainbow(inst)
    assert res.met_target
    assert is_rainbow_matching(inst, res.matching)
    assert res.size <= max_rainbow(inst).size
    assert res.steps <= inst.n
    for k in range(inst.n):
        if inst.N >= theorem_bound(inst.n, k):
            assert find_rainbow(inst, inst.n - k).met_target


@given(bipartite_instances(max_n=4, max_N=7))
def test_exact_maximum_is_exhausted(inst):
    best = max_rainbow(inst).witness
    if len(best) < inst.n:
        out = augment_once(inst, best)
        assert isinstance(out, Exhausted)
        assert check_counting_certificate(inst, out.state, len(best))


@given(bipartite_instances())
def test_deterministic(inst):
    a = find_rainbow(inst, trace=True)
    b = find_rainbow(inst, trace=True)
    assert a.matching == b.matching and a.trace == b.trace


def test_lenient_instance():
    inst = Instance.bipartite(2, 3, 3, [
        [(0, 0), (1, 1), (2, 2)],
        [(0, 1), (1, 2), (2, 0)],
        [(0, 2), (1, 0)],
    ])
    res = find_rainbow(inst, 2)
    assert res.met_target and is_rainbow_matching(inst, res.matching)
