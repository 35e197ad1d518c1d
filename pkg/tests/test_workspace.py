from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from pshtopos.fincat import validate_category
from pshtopos.workspace import Config, Workspace, WorkspaceError, parse_workspace, print_workspace

GRAPHS = (Path(__file__).resolve().parents[1] / "demos" / "workspaces" / "graphs.ws").read_text()


def errors_of(text):
    with pytest.raises(WorkspaceError) as info:
        parse_workspace(text)
    return info.value.errors


def test_empty_file_is_an_empty_workspace():
    ws = parse_workspace("")
    assert ws.bases == {} and ws.presheaves == {} and ws.config == Config()
    assert parse_workspace("# only a comment\n\n").presheaves == {}


def test_graph_workspace_loads():
    ws = parse_workspace(GRAPHS)
    assert validate_category(ws.base("G")).ok
    assert ws.presheaf("edge").sizes == (2, 1)
    assert ws.presheaf("loop").sizes == (1, 1)
    assert ws.morphisms["collapse"].morphism.dst == ws.presheaf("loop")
    assert ws.subs["ends"].sub.selected == (frozenset({0, 1}), frozenset())


def test_builtin_bases_are_available():
    ws = parse_workspace("presheaf p arrow\n  carrier a x\nend\n")
    assert ws.presheaf("p").base.n_objects == 2
    assert ws.base("terminal").n_objects == 1


def test_round_trip():
    ws = parse_workspace(GRAPHS)
    text = print_workspace(ws)
    again = parse_workspace(text)
    assert print_workspace(again) == text
    assert again.presheaves == ws.presheaves and again.config == ws.config


@given(st.integers(0, 10), st.integers(1, 3), st.integers(10, 10**6))
def test_config_round_trip(seed, carrier, budget):
    ws = Workspace(config=Config(seed=seed, max_carrier=carrier, budget=budget))
    assert parse_workspace(print_workspace(ws)).config == ws.config


def test_associativity_violation_names_the_triple():
    text = """base B
  objects a b c d
  arrow f a -> b
  arrow g b -> c
  arrow h c -> d
  arrow gf a -> c
  arrow hg b -> d
  arrow x a -> d
  arrow y a -> d
  compose g f -> gf
  compose h g -> hg
  compose h gf -> x
  compose hg f -> y
end
"""
    errs = errors_of(text)
    assert any("associativ" in e.message and all(n in e.message for n in ("f", "g", "h"))
               for e in errs)
    assert all(e.line >= 1 for e in errs)


def test_non_natural_morphism_is_positioned():
    text = GRAPHS.replace("map V v1 -> x", "map V v1 -> x\n  map E e -> l\n  map E e -> l", 1)
    errs = errors_of(text)
    assert errs and errs[0].line > 1


@pytest.mark.parametrize("text, fragment", [
    ("presheaf p nowhere\nend\n", "nowhere"),
    ("bogus\n", "bogus"),
    ("config\n  seed many\nend\n", "many"),
    ("presheaf p graph\n  carrier V a\n  carrier E e\nend\n", "s"),
    ("base B\n  objects a\n  arrow f a -> z\nend\n", "z"),
])
def test_errors_carry_position_and_cause(text, fragment):
    errs = errors_of(text)
    assert any(fragment in e.message for e in errs)
    assert all(e.line >= 1 and e.col >= 1 for e in errs)


def test_duplicate_names_rejected():
    errs = errors_of("presheaf p graph\nend\npresheaf p graph\nend\n")
    assert errs[0].line == 3
