import json
import random

import pytest
from hypothesis import given

from _support import (
    connected_gnp,
    graphs,
    has_chordless_cycle_nx,
    mutate_adjacent_branches,
    mutate_internal_chord,
    mutate_nonadjacent_branches,
    mutate_shared_internal,
    padded_certificate,
    witnesses,
)
from inducedsub.graph import Graph, complete_graph, cycle_graph, path_graph, petersen_graph, star_graph
from inducedsub.invariants import girth
from inducedsub.subdivision import (
    MalformedCertificate,
    SearchStatus,
    SubdivisionCertificate,
    certificate_from_json_obj,
    chordless_cycle_exists,
    complete_pattern,
    find_induced_subdivision,
    find_subdivision,
    is_induced_path,
    one_subdivision,
    shortest_induced_path,
    verify,
)


def identity_clique_certificate(n: int) -> SubdivisionCertificate:
    k = complete_graph(n)
    return SubdivisionCertificate(k, k, tuple(range(n)), {e: e for e in k.edges()})


def test_clique_is_induced_but_not_proper():
    r = verify(identity_clique_certificate(4))
    assert r.is_subdivision and r.is_induced and not r.is_proper
    assert all(v.kind == "adjacent_branches" for v in r.violations)


def test_one_subdivision_of_k4_fully_valid():
    g, cert = one_subdivision(complete_graph(4))
    assert g.n == 10
    r = verify(cert)
    assert r.is_subdivision and r.is_induced and r.is_proper and not r.violations


def test_chord_between_internal_vertices_is_pinpointed():
    _, cert = one_subdivision(complete_graph(4))
    # internal vertices 4 and 9 sit on different paths
    host = Graph(cert.host.n, set(cert.host.edges()) | {(4, 9)})
    r = verify(SubdivisionCertificate(host, cert.pattern, cert.branch, dict(cert.paths)))
    assert r.is_subdivision and not r.is_induced
    assert (4, 9) in witnesses(r)


def test_malformed_certificates():
    g, cert = one_subdivision(complete_graph(3))
    with pytest.raises(MalformedCertificate):
        verify(SubdivisionCertificate(g, cert.pattern, (0, 1, 99), dict(cert.paths)))
    with pytest.raises(MalformedCertificate):
        verify(SubdivisionCertificate(g, cert.pattern, (0, 0, 1), dict(cert.paths)))
    paths = dict(cert.paths)
    paths.pop((0, 1))
    with pytest.raises(MalformedCertificate):
        verify(SubdivisionCertificate(g, cert.pattern, cert.branch, paths))


def test_certificate_json_roundtrip():
    g, cert = one_subdivision(complete_graph(4))
    back = certificate_from_json_obj(g, json.loads(cert.to_json()))
    assert back.branch == cert.branch and dict(back.paths) == dict(cert.paths)


def test_report_consistency_on_random_certificates():
    rng = random.Random(0)
    for _ in range(50):
        r = verify(padded_certificate(rng))
        assert r.is_induced and r.is_proper and not r.violations


def test_mutation_classes():
    rng = random.Random(1)
    for _ in range(60):
        cert = padded_certificate(rng)
        m, e = mutate_internal_chord(cert, rng)
        r = verify(m)
        assert r.is_subdivision and not r.is_induced and e in witnesses(r)
        m, x = mutate_shared_internal(cert, rng)
        r = verify(m)
        assert not r.is_subdivision and any(v.kind == "shared_internal" and x in v.witness for v in r.violations)
        m, e = mutate_nonadjacent_branches(cert, rng)
        r = verify(m)
        assert not r.is_induced and e in witnesses(r)
        m, e = mutate_adjacent_branches(cert, rng)
        r = verify(m)
        assert not r.is_induced and e in witnesses(r)


def test_finder_examples():
    res = find_induced_subdivision(cycle_graph(7), complete_pattern(3))
    assert res.status is SearchStatus.FOUND
    assert res.certificate.vertex_set == frozenset(range(7))
    res = find_induced_subdivision(petersen_graph(), complete_pattern(4))
    assert res.status is SearchStatus.FOUND
    r = verify(res.certificate)
    assert r.is_induced
    res = find_induced_subdivision(star_graph(5), complete_pattern(3))
    assert res.status is SearchStatus.NONE_EXISTS


def test_petersen_has_no_proper_induced_k4_subdivision():
    # every induced K4-subdivision of the Petersen graph has two adjacent branch vertices
    res = find_induced_subdivision(petersen_graph(), complete_pattern(4), proper_only=True)
    assert res.status is SearchStatus.NONE_EXISTS


def test_finder_budget():
    g = connected_gnp(60, 0.1, random.Random(2))
    res = find_induced_subdivision(g, complete_pattern(6), budget=3)
    assert res.status in (SearchStatus.BUDGET_EXHAUSTED, SearchStatus.NONE_EXISTS)


@given(graphs(max_n=8))
def test_k3_finder_agrees_with_chordless_cycle_oracles(g):
    res = find_induced_subdivision(g, complete_pattern(3))
    assert res.status is not SearchStatus.BUDGET_EXHAUSTED
    found = res.status is SearchStatus.FOUND
    assert found == chordless_cycle_exists(g) == has_chordless_cycle_nx(g)
    if found:
        assert verify(res.certificate).is_induced


def test_plain_subdivision_finder():
    res = find_subdivision(complete_graph(5), complete_pattern(5))
    assert res.status is SearchStatus.FOUND and verify(res.certificate).is_subdivision


def test_one_subdivision_examples():
    g, cert = one_subdivision(complete_graph(3))
    assert g.n == 6 and girth(g) == 6
    g, _ = one_subdivision(path_graph(2))
    assert g.n == 3 and g.m == 2
    g, cert = one_subdivision(petersen_graph())
    assert g.n == 25 and girth(g) == 10
    assert verify(cert).is_proper


@given(graphs(min_n=3, max_n=9))
def test_one_subdivision_doubles_girth(h):
    g, cert = one_subdivision(h)
    gh = girth(h)
    if h.m:
        assert verify(cert).is_induced
    if isinstance(gh, int):
        assert girth(g) == 2 * gh


def test_shortest_induced_path_examples():
    c6 = cycle_graph(6)
    p = shortest_induced_path(c6, range(6), 0, 3)
    assert len(p) == 4
    assert shortest_induced_path(c6, [0, 2], 0, 2) is None


def test_shortest_induced_path_random_hosts():
    rng = random.Random(5)
    for _ in range(100):
        g = connected_gnp(12, 0.25, rng)
        allowed = set(rng.sample(range(12), 8))
        u, v = rng.sample(sorted(allowed), 2)
        p = shortest_induced_path(g, allowed, u, v)
        if p is not None:
            assert is_induced_path(g, p) and set(p) <= allowed
