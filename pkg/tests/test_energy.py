import random
from fractions import Fraction

import pytest

from loom import (
    CrystalGraph,
    choose_grid,
    compatible_total_order,
    energy_edge_check,
    energy_table,
    linear_path,
    major_index,
    refine,
    refined_major_index,
)
from loom.crystals import Node
from loom.energy import DisconnectedTensorSquareError, EnergyError


def a1_keys(a1):
    w = a1.classical_fundamental(1)
    return linear_path(w).key(), linear_path(-w).key()


def test_a1_energy_fixture(a1, a1_energy):
    kp, km = a1_keys(a1)
    assert a1_energy.value(kp, kp) == 0
    assert a1_energy.value(kp, km) == 1
    assert a1_energy.value(km, kp) == 0
    assert a1_energy.value(km, km) == 0
    assert a1_energy.grid == 1


def test_energy_total_and_consistent(a1, a1_base, a1_energy, a2, a2_base, a2_energy,
                                     c2, c2_base):
    c2_energy = energy_table(c2_base, c2.pairing)
    for cartan, base, table in (
        (a1, a1_base, a1_energy),
        (a2, a2_base, a2_energy),
        (c2, c2_base, c2_energy),
    ):
        assert len(table.chi) == len(base) ** 2
        assert table.value(base.seed, base.seed) == 0
        assert energy_edge_check(base, cartan.pairing, table) == []


def test_a2_energy_values_and_order(a2_base, a2_energy):
    values = set(a2_energy.chi.values())
    assert values == {0, 1}
    order = compatible_total_order(a2_base, a2_energy)
    assert order is not None
    rank = {k: r for r, k in enumerate(order)}
    for (a, b), v in a2_energy.chi.items():
        assert v == (0 if rank[a] <= rank[b] else 1)


def test_energy_randomized_bfs_deterministic(a2, a2_base, a2_energy):
    for seed in range(20):
        again = energy_table(a2_base, a2.pairing, rng=random.Random(seed))
        assert again.chi == a2_energy.chi


def test_choose_grid(a1_base, a2_base, a1):
    assert choose_grid(a1_base) == 1
    assert choose_grid(a2_base) == 1
    w = a1.classical_fundamental(1)
    from loom import make_path

    half = make_path([(2 * w, Fraction(1, 2)), (-2 * w, Fraction(1, 2))])
    third = make_path([(3 * w, Fraction(1, 3)), (-3 * w, Fraction(2, 3))])
    fake = CrystalGraph(
        label="grid", indices=(0, 1),
        nodes={
            half.key(): Node(half, half.weight(), (0, 0), (0, 0)),
            third.key(): Node(third, third.weight(), (0, 0), (0, 0)),
        },
        f_edges={}, seed=half.key(),
    )
    assert choose_grid(fake) == 6


def test_refine(a1, a1_base, a1_energy):
    kp, km = a1_keys(a1)
    assert refine(a1_base, (kp, km), 1) == [kp, km]
    assert refine(a1_base, (kp,), 2) == [kp, kp]
    for key in refine(a1_base, (kp, km, km), 1):
        assert key in a1_base.nodes


def test_major_index(a1, a1_energy, a1_base):
    kp, km = a1_keys(a1)
    assert major_index(a1_energy, [kp, kp]) == 0
    assert major_index(a1_energy, [kp, km]) == 1
    assert major_index(a1_energy, [km, kp]) == 0
    assert refined_major_index(a1_energy, a1_base, (kp, km)) == 1
    with pytest.raises(EnergyError):
        a1_energy.value(kp, ("missing",))


def test_energy_json(a1, a1_energy):
    from loom.crystals import key_str

    obj = a1_energy.to_json(key_str)
    assert obj["N"] == 1 and obj["crystal"] == "A1:B(w1)"
    assert len(obj["chi"]) == 4
    assert sorted(entry["v"] for entry in obj["chi"]) == [0, 0, 0, 1]


def test_disconnected_tensor_square_detected(a1, a1_base):
    # two isolated nodes: the sweep cannot leave the seed pair
    nodes = {k: a1_base.nodes[k] for k in a1_base.nodes}
    island = CrystalGraph(
        label="island", indices=a1_base.indices, nodes=nodes,
        f_edges={}, seed=a1_base.seed,
    )
    with pytest.raises(DisconnectedTensorSquareError):
        energy_table(island, a1.pairing)
