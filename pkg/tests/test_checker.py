import json
import math
import random
from fractions import Fraction

import pytest

from oracles import brute_sub_horseshoes, is_simple_cycle, peel_fixed_point
from localcolor.checker import (
    CheckerParams,
    WorkingSubgraph,
    check_two_degenerate,
    count_sub_horseshoes,
    find_i_cycle,
    peel_low_degree,
    threshold_b,
)
from localcolor.coloring import is_k_degenerate
from localcolor.constructions import paper_parameters
from localcolor.errors import InputError, SessionStateError
from localcolor.random_models import RngStream, begin_reveal, reveal_to_ball


def F_from(levels, edges, down=None):
    F = WorkingSubgraph(levels)
    F.add_edges(edges)
    F.down_degree.update(down or {})
    return F


# levels used by hand fixtures: L_1 = 1..4, L_2 = 5..9, L_3 = 10..12
LEVELS = [[0], [1, 2, 3, 4], [5, 6, 7, 8, 9], [10, 11, 12]]


def test_params_validation():
    with pytest.raises(InputError):
        CheckerParams(1, 2)
    with pytest.raises(InputError):
        CheckerParams(3, 2, epsilon=0)
    with pytest.raises(InputError):
        CheckerParams(3, 2, threshold_schedule="other")


def test_find_i_cycle_fixtures():
    assert find_i_cycle(F_from(LEVELS, [(5, 6), (6, 10), (10, 11)]), 2) is None
    tri = find_i_cycle(F_from(LEVELS, [(5, 6), (6, 7), (5, 7)]), 2)
    assert sorted(tri) == [5, 6, 7]
    # one vertex on level 2, the rest of the cycle on level 3
    F = F_from(LEVELS, [(5, 10), (10, 11), (11, 12), (5, 12)])
    cyc = find_i_cycle(F, 2)
    assert sorted(cyc) == [5, 10, 11, 12]
    adj = lambda a, b: b in F.nbrs[a]
    assert is_simple_cycle(adj, cyc)
    # a cycle strictly above level 2 does not touch it
    assert find_i_cycle(F_from(LEVELS, [(10, 11), (11, 12), (10, 12), (5, 10)]), 2) is None
    # edges down to level 1 are ignored at i = 2
    assert find_i_cycle(F_from(LEVELS, [(1, 5), (1, 6), (5, 6)]), 2) is None


def _on_cycle(F, w, i):
    """Brute force: w lies on a cycle iff some incident edge is not a bridge."""
    for x in F.upper_nbrs(w, i):
        seen, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for z in F.upper_nbrs(y, i):
                if (y, z) in ((x, w), (w, x)) or z in seen:
                    continue
                seen.add(z)
                stack.append(z)
        if w in seen:
            return True
    return False


def _random_levels(rnd, sizes):
    levels, nxt = [[0]], 1
    for s in sizes:
        levels.append(list(range(nxt, nxt + s)))
        nxt += s
    return levels


def _random_edges(rnd, levels, i, p):
    lo = [u for j, L in enumerate(levels) if j >= i for u in L]
    lvl = {u: j for j, L in enumerate(levels) for u in L}
    return [(a, b) for a in lo for b in lo if a < b and abs(lvl[a] - lvl[b]) <= 1 and rnd.random() < p]


def test_find_i_cycle_random_against_bridge_oracle():
    rnd = random.Random(3)
    for _ in range(400):
        levels = _random_levels(rnd, [rnd.randint(1, 5), rnd.randint(1, 6), rnd.randint(0, 5)])
        F = F_from(levels, _random_edges(rnd, levels, 2, rnd.choice([0.1, 0.2, 0.35])))
        cyc = find_i_cycle(F, 2)
        expected = any(_on_cycle(F, w, 2) for w in levels[2])
        assert (cyc is not None) == expected
        if cyc is not None:
            assert is_simple_cycle(lambda a, b: b in F.nbrs[a], cyc)
            assert any(F.level_of[u] == 2 for u in cyc)
            assert all(F.level_of[u] >= 2 for u in cyc)


def test_cycle_rank():
    assert F_from(LEVELS, [(5, 6), (6, 7)]).cycle_rank(2) == 0
    assert F_from(LEVELS, [(5, 6), (6, 7), (5, 7), (10, 11), (11, 12), (10, 12)]).cycle_rank(2) == 2
    assert F_from(LEVELS, [(10, 11), (11, 12), (10, 12)]).cycle_rank(2) == 1


def test_peel_examples():
    F = F_from(LEVELS, [], {5: 1})
    assert 5 in peel_low_degree(F, 2)
    F = F_from(LEVELS, [(5, 6), (6, 7)], {5: 1, 6: 1, 7: 1})
    assert peel_low_degree(F, 2)[:3] == [5, 6, 7]
    # K_4 on levels 2-3 with enough down-edges survives
    F = F_from(LEVELS, [(5, 6), (5, 10), (5, 11), (6, 10), (6, 11), (10, 11), (7, 10)], {5: 1, 6: 1, 7: 1})
    deleted = peel_low_degree(F, 2)
    assert 7 in deleted and {5, 6, 10, 11} <= F.alive
    for u in F.upper(2):
        assert F.degree(u, 2) >= 3


def _random_peel(F, i, rnd):
    while True:
        cand = [u for u in F.upper(i) if F.degree(u, i) <= 2]
        if not cand:
            return
        F.delete(rnd.choice(cand))


def test_peel_matches_fixed_point_and_random_order():
    rnd = random.Random(8)
    for _ in range(250):
        levels = _random_levels(rnd, [rnd.randint(1, 4), rnd.randint(1, 6), rnd.randint(0, 5)])
        edges = _random_edges(rnd, levels, 2, rnd.choice([0.2, 0.4, 0.6]))
        down = {u: 1 + rnd.randint(0, 2) for u in levels[2]}
        F = F_from(levels, edges, down)
        peel_low_degree(F, 2)
        got = set(F.upper(2))
        verts = [u for L in levels[2:] for u in L]
        assert got == peel_fixed_point(verts, edges, down)
        G = F_from(levels, edges, down)
        _random_peel(G, 2, rnd)
        assert set(G.upper(2)) == got


def test_horseshoe_examples():
    F = F_from(LEVELS, [])
    assert count_sub_horseshoes(F, 2, {5: 0, 6: 0}) == 0
    assert count_sub_horseshoes(F, 2, {5: 1}) == 2
    # 3-vertex i-path 5 - 6 - 7 with t = (1, 0, 1)
    F = F_from(LEVELS, [(5, 6), (6, 7)])
    t = {5: 1, 6: 0, 7: 1}
    got = count_sub_horseshoes(F, 2, t)
    assert got == brute_sub_horseshoes([5, 6, 7, 8, 9, 10, 11, 12], [(5, 6), (6, 7)], set(LEVELS[2]), t)
    # 5..7 (4), 5..6 (2), 6..7 (2), 5 (2), 6 (0), 7 (2)
    assert got == 12


def test_horseshoe_needs_forest():
    F = F_from(LEVELS, [(5, 6), (6, 7), (5, 7)])
    with pytest.raises(SessionStateError):
        count_sub_horseshoes(F, 2, {5: 1})


def _random_forest(rnd, verts, lvl, p):
    parent = {u: u for u in verts}

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pairs = [(a, b) for a in verts for b in verts if a < b and abs(lvl[a] - lvl[b]) <= 1]
    rnd.shuffle(pairs)
    out = []
    for a, b in pairs:
        if rnd.random() < p and root(a) != root(b):
            parent[root(a)] = root(b)
            out.append((a, b))
    return out


def test_horseshoe_count_matches_brute_force():
    rnd = random.Random(12)
    for _ in range(300):
        levels = _random_levels(rnd, [rnd.randint(1, 4), rnd.randint(1, 6), rnd.randint(0, 4)])
        lvl = {u: j for j, L in enumerate(levels) for u in L}
        verts = [u for L in levels[2:] for u in L]
        edges = _random_forest(rnd, verts, lvl, rnd.choice([0.3, 0.6, 0.9]))
        t = {u: rnd.choice([0, 0, 1, 2]) for u in levels[2]}
        F = F_from(levels, edges)
        assert count_sub_horseshoes(F, 2, t) == brute_sub_horseshoes(verts, edges, set(levels[2]), t)


def test_threshold_examples():
    fixed = CheckerParams(3, 4)
    large = CheckerParams(3, 4, threshold_schedule="paper_large_r")
    sizes = [1, 30, 50, 80, 90]
    assert threshold_b(1, sizes, fixed) == 0
    assert threshold_b(1, sizes, large) == 0
    assert threshold_b(2, sizes, fixed) == Fraction(10)
    d = 3 * 3 * math.log(3)
    assert threshold_b(2, sizes, large, d) == pytest.approx(3.0341, abs=1e-4)
    assert threshold_b(2, sizes, large) == pytest.approx(30 / d, rel=1e-12)
    # the outermost level always divides by ell
    assert threshold_b(4, sizes, large) == Fraction(80, 3)
    with pytest.raises(InputError):
        threshold_b(0, sizes, fixed)
    with pytest.raises(InputError):
        threshold_b(5, sizes, fixed)


def test_checker_trivial_verdicts():
    v = check_two_degenerate(begin_reveal(20, 0.0, 2, RngStream(0)), CheckerParams(3, 2))
    assert v.yes and v.reason is None
    v = check_two_degenerate(begin_reveal(5, 1.0, 1, RngStream(0)), CheckerParams(3, 1))
    assert v.answer == "no" and v.reason["kind"] == "i_cycle" and v.reason["level"] == 1
    assert v.per_level[0].c_i == 3


def test_checker_requires_fresh_session():
    s = begin_reveal(30, 0.1, 2, RngStream(0))
    s.inner_step(2)
    with pytest.raises(SessionStateError):
        check_two_degenerate(s, CheckerParams(3, 2))
    with pytest.raises(InputError):
        check_two_degenerate(begin_reveal(30, 0.1, 2, RngStream(0)), CheckerParams(3, 1))


def test_level_growth():
    # d = n p = 0.5, so any nonempty L_1 exceeds (1 + eps) d |L_0|
    for t in range(50):
        s = begin_reveal(10, 0.05, 1, RngStream(1, t))
        grown = len(s.levels[1]) > 0
        v = check_two_degenerate(s, CheckerParams(3, 1))
        assert (v.reason_kind == "level_growth") == grown
        assert v.yes == (not grown)
    v = check_two_degenerate(begin_reveal(60, 0.9, 1, RngStream(1)), CheckerParams(3, 1, degree_mode="paper"))
    assert v.reason_kind == "level_growth"


@pytest.mark.parametrize("ell, r, cap", [(3, 2, 5000), (2, 1, None), (3, 3, 3000)])
def test_soundness_and_h1(ell, r, cap):
    pp = paper_parameters(ell, r, cap)
    params = CheckerParams(ell, r)
    yes = 0
    for t in range(1500):
        s = begin_reveal(pp.n, pp.p, r, RngStream(99, t))
        v = check_two_degenerate(s, params)
        s.check_invariants()
        for rec in v.per_level:
            if rec.i == 1 and rec.h_i is not None:
                assert rec.h_i == 0
        if v.yes:
            yes += 1
            assert s.complete
            assert is_k_degenerate(reveal_to_ball(s).subgraph, 2)
    assert yes > 0


def test_verdict_deterministic():
    pp = paper_parameters(3, 2, 5000)
    params = CheckerParams(3, 2)
    for t in range(30):
        runs = [
            json.dumps(check_two_degenerate(begin_reveal(pp.n, pp.p, 2, RngStream(5, t)), params).to_json())
            for _ in range(2)
        ]
        assert runs[0] == runs[1]
