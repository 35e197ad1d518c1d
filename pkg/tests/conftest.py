from itertools import product

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pshtopos.fincat import arrow_category, curated_bases, graph_category, terminal_category
from pshtopos.presheaf import Presheaf, PresheafMorphism, is_natural, make_presheaf

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def finite_set(n: int) -> Presheaf:
    return make_presheaf(terminal_category(), {"*": list(range(n))}, {})


def graph(nodes, edges) -> Presheaf:
    """``edges`` maps an edge label to its (source, target) node labels."""
    return make_presheaf(graph_category(), {"V": list(nodes), "E": list(edges)},
                         {"s": {e: st_[0] for e, st_ in edges.items()},
                          "t": {e: st_[1] for e, st_ in edges.items()}})


def arrow_presheaf(above, below, u) -> Presheaf:
    """``u`` sends each element over ``b`` to one over ``a``."""
    return make_presheaf(arrow_category(), {"a": list(below), "b": list(above)}, {"u": dict(u)})


def function(src: Presheaf, dst: Presheaf, values) -> PresheafMorphism:
    return PresheafMorphism(src, dst, (tuple(values),))


def brute_hom_count(F: Presheaf, G: Presheaf) -> int:
    """Count natural families by listing every family of component functions."""
    base = F.base
    per_object = [list(product(range(G.size(c)), repeat=F.size(c))) for c in range(base.n_objects)]
    return sum(is_natural(PresheafMorphism(F, G, comps)) for comps in product(*per_object))


def brute_sieves(base, c):
    """Restriction-closed sets of arrows into ``c``, by listing every subset."""
    arrows = base.into(c)
    out = []
    for bits in product((0, 1), repeat=len(arrows)):
        chosen = {m for m, b in zip(arrows, bits) if b}
        if all(base.compose(m, k) in chosen
               for m in chosen for k in range(base.n_morphisms) if base.dst[k] == base.src[m]):
            out.append(chosen)
    return out


@pytest.fixture
def edge():
    return graph(["v0", "v1"], {"e": ("v0", "v1")})


@pytest.fixture
def node():
    return graph(["n"], {})


@pytest.fixture
def loop():
    return graph(["x"], {"l": ("x", "x")})


@pytest.fixture(params=sorted(curated_bases()))
def curated_base(request):
    return curated_bases()[request.param]


small_sets = st.integers(min_value=0, max_value=3).map(finite_set)


@st.composite
def set_functions(draw, max_size=3):
    a = draw(st.integers(0, max_size))
    b = draw(st.integers(1 if a else 0, max_size))
    values = draw(st.lists(st.integers(0, b - 1), min_size=a, max_size=a)) if b else []
    return function(finite_set(a), finite_set(b), values)
