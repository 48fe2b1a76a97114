from fractions import Fraction

import pytest

from loom import (
    AmbientError,
    IntegralityError,
    PathError,
    concat,
    constant_path,
    epsilon,
    grid_size,
    h_extrema,
    linear_path,
    lowering_op,
    make_path,
    phi,
    project,
    raising_op,
    segment_uniform,
    stretch,
    weyl_act,
)
from loom import Weight


def fund(cartan, i=1, classical=True):
    return cartan.classical_fundamental(i, classical=classical)


def test_linear_path_statistics(a1, a2):
    zero = constant_path(a1)
    for i in a1.indices:
        assert epsilon(a1, zero, i) == 0 and phi(a1, zero, i) == 0
    pp = linear_path(fund(a1))
    assert epsilon(a1, pp, 1) == 0 and phi(a1, pp, 1) == 1
    assert epsilon(a1, pp, 0) == 1 and phi(a1, pp, 0) == 0
    p2 = linear_path(fund(a2))
    assert epsilon(a2, p2, 0) == 1
    assert epsilon(a2, p2, 1) == 0 and epsilon(a2, p2, 2) == 0


def test_linear_path_needs_integrality(a1):
    with pytest.raises(PathError):
        linear_path(Weight((Fraction(1, 2), Fraction(-1, 2))))


def test_height_extrema(a1):
    pp = linear_path(fund(a1))
    ext0 = h_extrema(a1, pp, 0)
    assert ext0.max_value == 1 and ext0.e_plus == 1 and ext0.e_minus == 0
    ext1 = h_extrema(a1, pp, 1)
    assert ext1.max_value == 0 and ext1.e_plus == 0
    assert h_extrema(a1, constant_path(a1), 0).max_value == 0


def test_nonintegral_height_maximum_rejected(a1):
    w = fund(a1)
    bent = make_path([(w, Fraction(1, 2)), (-3 * w, Fraction(1, 2))])
    with pytest.raises(IntegralityError):
        epsilon(a1, bent, 0)


def test_root_operator_base_cases(a1, a2):
    pp, pm = linear_path(fund(a1)), linear_path(-fund(a1))
    assert raising_op(a1, pp, 0) == pm
    assert raising_op(a1, pp, 1) is None
    assert lowering_op(a1, pp, 1) == pm
    assert lowering_op(a1, pm, 1) is None
    theta = a2.highest_finite_root()
    assert raising_op(a2, linear_path(fund(a2)), 0) == linear_path(fund(a2) - theta)
    assert linear_path(fund(a2) - theta) == linear_path(-fund(a2, 2))


def test_operators_are_quasi_inverse(a1_base, a1, a2_base, a2, c2_base, c2):
    for cartan, graph in ((a1, a1_base), (a2, a2_base), (c2, c2_base)):
        for key in graph.sorted_keys():
            path = graph.nodes[key].element
            for i in cartan.indices:
                down = lowering_op(cartan, path, i)
                if down is not None:
                    assert raising_op(cartan, down, i) == path
                up = raising_op(cartan, path, i)
                if up is not None:
                    assert lowering_op(cartan, up, i) == path


def test_operator_weight_gradient(a2, a2_base):
    for key in a2_base.sorted_keys():
        path = a2_base.nodes[key].element
        for i in a2.indices:
            down = lowering_op(a2, path, i)
            if down is not None:
                assert down.weight() == path.weight() - a2.simple_root(i).classical()


def test_weyl_action(a1, a2):
    pp = linear_path(fund(a1))
    assert weyl_act(a1, pp, 1) == linear_path(-fund(a1))
    assert weyl_act(a1, weyl_act(a1, pp, 1), 1) == pp
    assert weyl_act(a1, constant_path(a1), 0) == constant_path(a1)
    for i in a2.indices:
        lam = fund(a2) + fund(a2, 2)
        assert weyl_act(a2, linear_path(lam), i) == linear_path(a2.reflect(i, lam))


def test_weyl_involution_on_bent_paths(a1, a1_base, a2, a2_base):
    import itertools

    for cartan, graph in ((a1, a1_base), (a2, a2_base)):
        paths = [graph.nodes[k].element for k in graph.sorted_keys()]
        for pair in itertools.product(paths, repeat=2):
            bent = concat(list(pair))
            for i in cartan.indices:
                assert weyl_act(cartan, weyl_act(cartan, bent, i), i) == bent


def test_concat(a1):
    pp, pm = linear_path(fund(a1)), linear_path(-fund(a1))
    two = concat([pp, pm])
    assert len(two.segments) == 2 and two.weight().is_zero
    assert concat([pp, pp]) == stretch(pp, 2)
    assert concat([pp, constant_path(a1)]) == pp
    with pytest.raises(AmbientError):
        concat([pp, constant_path(a1, classical=False)])


def test_stretch(a1):
    pp = linear_path(fund(a1))
    assert stretch(pp, 3) == linear_path(3 * fund(a1))
    assert stretch(pp, 1) == pp
    with pytest.raises(PathError):
        stretch(pp, 0)


def test_stretch_intertwines_operators(a1, a1_base, a2, a2_base):
    for cartan, graph in ((a1, a1_base), (a2, a2_base)):
        for key in graph.sorted_keys():
            path = graph.nodes[key].element
            for i in cartan.indices:
                for n in (2, 3):
                    lifted = raising_op(cartan, path, i)
                    big = stretch(path, n)
                    for _ in range(n):
                        big = None if big is None else raising_op(cartan, big, i)
                    assert big == (None if lifted is None else stretch(lifted, n))


def test_projection(a1):
    fw = fund(a1, classical=False)
    delta = a1.null_root()
    assert project(linear_path(3 * fw + 2 * delta)) == linear_path(3 * fund(a1))
    with pytest.raises(AmbientError):
        project(linear_path(fund(a1)))
    affine = linear_path(fw + delta)
    for i in a1.indices:
        assert epsilon(a1, affine, i) == epsilon(a1, project(affine), i)


def test_projection_commutes_on_window(a1):
    from loom import PathOps, generate

    graph = generate(PathOps(a1, "affine"), linear_path(fund(a1, classical=False)),
                     window=2)
    for key in graph.sorted_keys():
        path = graph.nodes[key].element
        if abs(path.weight().delta) > 1:
            continue
        for i in a1.indices:
            lifted = raising_op(a1, path, i)
            if lifted is not None:
                assert project(lifted) == raising_op(a1, project(path), i)


def test_segment_uniform(a1):
    pp = linear_path(fund(a1))
    assert segment_uniform(pp, 2) == [fund(a1), fund(a1)]
    bent = lowering_op(a1, stretch(pp, 2), 1)
    dirs = segment_uniform(bent, 2)
    assert dirs == [-2 * fund(a1), 2 * fund(a1)]
    rebuilt = make_path([(d, Fraction(1, 2)) for d in dirs])
    assert rebuilt == bent
    with pytest.raises(PathError):
        segment_uniform(bent, 3)
    assert grid_size(bent) == 2


def test_segmentation_reflection_law(a1, a1_base, a2, a2_base, c2, c2_base):
    # a raising step reflects one contiguous block of the uniform word and
    # that block's pairing sum accounts for exactly one unit of height
    from loom import choose_grid

    for cartan, graph, power in ((a1, a1_base, 2), (a2, a2_base, 2), (c2, c2_base, 1)):
        import itertools

        base_grid = choose_grid(graph)
        paths = [(graph.nodes[k].element, base_grid) for k in graph.sorted_keys()]
        samples = list(paths)
        if power > 1:
            samples += [
                (concat(list(pair)), base_grid * power)
                for pair in itertools.product([p for p, _ in paths], repeat=power)
            ]
        for path, n in samples:
            word = segment_uniform(path, n)
            for i in cartan.indices:
                lifted = raising_op(cartan, path, i)
                if lifted is None:
                    continue
                ext = h_extrema(cartan, path, i)
                k = ext.e_minus * n
                l = ext.e_plus * n
                assert k.denominator == 1 and l.denominator == 1
                k, l = int(k), int(l)
                lifted_word = segment_uniform(lifted, n)
                for j in range(n):
                    if k < j + 1 <= l:
                        assert lifted_word[j] == cartan.reflect(i, word[j])
                    else:
                        assert lifted_word[j] == word[j]
                assert sum(cartan.pairing(i, word[j]) for j in range(k, l)) == -n


def test_equality_up_to_reparametrization(a1):
    w = fund(a1)
    u = -w
    one = make_path([(2 * w, Fraction(1, 2)), (2 * u, Fraction(1, 2))])
    other = make_path([(3 * w, Fraction(1, 3)), (Fraction(3, 2) * u, Fraction(2, 3))])
    assert one == other
    assert hash(one) == hash(other)
    assert one.key() == (w, u)


def test_pause_segments_are_dropped(a1):
    w = fund(a1)
    zero = a1.zero_weight()
    paused = make_path([(2 * w, Fraction(1, 2)), (zero, Fraction(1, 2))])
    assert paused == linear_path(w)


def test_path_json(a1):
    pp = linear_path(fund(a1))
    assert pp.to_json() == {
        "ambient": "classical",
        "segments": [{"dir": ["-1/1", "1/1"], "len": "1/1"}],
    }
    affine = linear_path(fund(a1, classical=False) + a1.null_root())
    seg = affine.to_json()["segments"][0]
    assert seg["dir_delta"] == "1/1"
