import pytest

from graphs import form2_example, football_form1, football_form2, loop_with_tail, theta
from orbigraph.classify import classify, classify_football, classify_teardrop
from orbigraph.core import ConeSignature, Football, SingularGraph, Teardrop
from orbigraph.errors import InvalidGraph, WitnessInconsistent


def sigs(x) -> set:
    return {tuple(s) for s in x.signatures()}


def test_form2_example_is_form2() -> None:
    x = classify_teardrop(form2_example(), Teardrop("e1"))
    assert x.form == "TD_Form2"
    assert [tuple(s) for s in x.signatures()] == [(2, 2), (2, 2, 3)]
    assert x.underlying == "S2xI"
    assert x.interior_vertices == {"A", "B", "C"}
    assert x.interior_edges == {"e1", "y"}
    assert x.summary() == "TD_Form2  boundary: S2(2,2) ; S2(2,2,3)  underlying: S2xI"


def test_form2_example_labels() -> None:
    x = classify_teardrop(form2_example(), "e1")
    assert x.label("a") == 3
    assert x.label("aplus") == 2
    assert (x.label("aminus"), x.label("abarminus")) == (4, 2)


def test_circle_is_smooth_teardrop() -> None:
    x = classify(SingularGraph([], [("c", 5, None)]), Teardrop("c"))
    assert x.form == "TD_Smooth"
    assert x.signatures() == (ConeSignature(),)
    assert x.underlying == "S2xS1minusB3"


def test_loop_with_equal_far_branches_is_form4a() -> None:
    x = classify(loop_with_tail(3, 2, 3), Teardrop("e"))
    assert x.form == "TD_Form4a"
    assert sigs(x) == {(3, 3)}


def test_loop_with_unequal_far_branches_is_form4b() -> None:
    # v++ = u carries e++ = h(3) to w and k(2) to z; w and z are closed off by loops
    g = SingularGraph(
        ["v", "u", "w", "z"],
        [
            ("e", 2, ("v", "v")),
            ("ep", 2, ("v", "u")),
            ("h", 3, ("u", "w")),
            ("k", 2, ("u", "z")),
            ("l", 2, ("w", "w")),
            ("lz", 2, ("z", "z")),
        ],
    )
    x = classify(g, Teardrop("e"))
    assert x.form == "TD_Form4b"
    assert sigs(x) == {(2, 2, 2)}
    assert x.interior_edges == {"e", "ep", "h"}


def test_theta_prefers_parallel_rule() -> None:
    x = classify(theta(3, 2, 2), Teardrop("e"))
    assert x.form == "TD_Form5a"
    assert sigs(x) == {(2, 2)}


def test_parallel_choice_takes_heaviest_edge() -> None:
    x = classify(theta(2, 2, 3), Teardrop("e"))
    assert x.form == "TD_Form5a"
    assert "t" in x.interior_edges and "s" not in x.interior_edges


def test_form1_dumbbell() -> None:
    g = SingularGraph(["p", "m"], [("e", 3, ("m", "p")), ("lp", 2, ("p", "p")), ("lm", 2, ("m", "m"))])
    x = classify(g, Teardrop("e"))
    assert x.form == "TD_Form1"
    assert sigs(x) == {(2, 2)} and len(x.boundary) == 2


def test_form6_triangle() -> None:
    # e(2) from m (3 to u, 2 out) to p (4 to u, 3 out); u has a* = 2
    g = SingularGraph(
        ["p", "m", "u", "z"],
        [
            ("e", 2, ("m", "p")),
            ("ep", 4, ("p", "u")),
            ("em", 3, ("m", "u")),
            ("bp", 3, ("p", "z")),
            ("bm", 2, ("m", "z")),
            ("s", 2, ("u", "z")),
        ],
    )
    x = classify(g, Teardrop("e"))
    assert x.form == "TD_Form6"
    assert sigs(x) == {(2, 2, 3)}
    assert dict(x.labels)["astar"] == 2


def test_football_form2() -> None:
    x = classify_football(football_form2(), Football("e", "f"))
    assert x.form == "FB_Form2"
    assert sigs(x) == {(2, 2, 2)}
    assert x.interior_edges == {"e"}


def test_football_smooth_prefers_circle_e() -> None:
    g = SingularGraph(["v", "w"], [("e", 5, None), ("f", 2, ("v", "w")), ("g", 2, ("v", "w")), ("h", 2, ("v", "w"))])
    x = classify(g, Football("e", "f"))
    assert x.form == "FB_Smooth"
    assert sigs(x) == {(2, 2)}
    assert x.interior_edges == {"e"}


def test_football_smooth_on_light_circle() -> None:
    # the heavy edge is an arc, so the light circle is removed and e is pierced
    g = SingularGraph(["v", "w"], [("e", 3, ("v", "w")), ("s", 2, ("v", "w")), ("t", 2, ("v", "w")), ("f", 2, None)])
    x = classify(g, Football("e", "f"))
    assert x.form == "FB_Smooth"
    assert x.interior_edges == {"f"}
    assert sigs(x) == {(3, 3)}


def test_football_form1() -> None:
    x = classify(football_form1(), Football("e", "f", 0))
    assert x.form == "FB_Form1"
    assert sigs(x) == {(2, 2, 2), (2, 2, 3)}
    assert x.underlying == "S2xI"


def test_football_form1_side_moves_f_germs() -> None:
    x0 = classify(football_form1(), Football("e", "f", 0))
    x1 = classify(football_form1(), Football("e", "f", 1))
    assert x0.boundary[1][0].end == 0 and x1.boundary[1][0].end == 1


def test_football_form1_needs_side() -> None:
    with pytest.raises(WitnessInconsistent):
        classify(football_form1(), Football("e", "f"))


def test_invalid_graph_rejected() -> None:
    with pytest.raises(InvalidGraph):
        classify(theta(3, 3, 3), Teardrop("e"))


def test_light_edge_must_be_lighter() -> None:
    with pytest.raises(WitnessInconsistent):
        classify(football_form2(), Football("f", "e"))
