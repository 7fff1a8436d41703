import math
import random

import pytest

from generators import random_quilt
from nondet import (
    Patch,
    Quilt,
    SpaceMismatchError,
    StateSpace,
    abort_map,
    analyze,
    apply,
    basin,
    check_alternative,
    check_invariance,
    convergent_points,
    do_delta,
    fixed_points,
    if_delta,
    inverse,
    quilt_delta,
    skip_map,
    wp_do,
    wp_do_iterates,
    wp_if,
    wp_if_patchwise,
)
from nondet.catalog import gcd_quilt, stop_or_count, stop_or_count_quilt


# ------------------------------------------------------------------ oracles

def loop_oracle(q, a):
    """States from which every execution of the loop stops, and stops in ``a``.

    Explores the graph of enabled commands from each state; any reachable
    cycle (self-loops included) means some execution runs forever.
    """
    n = len(q.space)
    succ = [set() for _ in range(n)]
    guarded = [False] * n
    for p in q.patches:
        for x, y in p.transition.items():
            succ[x].add(y)
            guarded[x] = True
    state = {}  # 0 visiting, 1 good, 2 bad

    def visit(x):
        if x in state:
            return state[x] == 1
        if not guarded[x]:
            state[x] = 1 if x in a else 2
            return state[x] == 1
        state[x] = 0
        ok = all(visit(y) for y in succ[x])
        state[x] = 1 if ok else 2
        return ok

    out = set()
    for x in range(n):
        state.clear()
        if visit(x):
            out.add(x)
    return frozenset(out)


def if_oracle(q, a):
    out = set()
    for x in range(len(q.space)):
        enabled = [p for p in q.patches if x in p.transition]
        if enabled and all(p.transition[x] in a for p in enabled):
            out.add(x)
    return frozenset(out)


def gcd_value(x, y):
    return math.gcd(x, y)


@pytest.fixture(scope="module")
def gcd():
    return gcd_quilt(7)


def at(vs, **values):
    return vs.encode(values)


class TestQuiltBasics:
    def test_empty_quilt(self):
        space = StateSpace.of_size(5)
        q = Quilt(space, [])
        assert q.guard == q.hang == space.empty()
        assert quilt_delta(q) == skip_map(space)
        assert if_delta(q) == abort_map(space)
        assert do_delta(q) == skip_map(space)
        for a in space.subsets():
            assert wp_if(q, a) == space.empty()
            assert wp_do(q, a) == a

    def test_patch_validation(self):
        space = StateSpace.of_size(3)
        with pytest.raises(ValueError):
            Patch(space.set([0, 1]), {0: 1})
        with pytest.raises(ValueError):
            Patch(space.set([0]), {0: 7})
        p = Patch.build(space.set([0, 1]), lambda x: x + 1)
        assert dict(p.transition) == {0: 1, 1: 2}
        with pytest.raises(TypeError):
            p.transition[0] = 0

    def test_mixed_spaces_rejected(self):
        p = Patch.build(StateSpace.of_size(2).full(), lambda x: x)
        with pytest.raises(SpaceMismatchError):
            Quilt(StateSpace.of_size(3), [p])
        q = Quilt(StateSpace.of_size(2), [p])
        with pytest.raises(SpaceMismatchError):
            wp_if(q, StateSpace.of_size(3).full())

    def test_gcd_maps(self, gcd):
        vs, q = gcd
        s = vs.states
        assert quilt_delta(q)[at(vs, x=6, y=4)] == s.set([at(vs, x=2, y=4)])
        assert if_delta(q)[at(vs, x=5, y=0)] == s.set([at(vs, x=5, y=0)])
        assert at(vs, x=5, y=0) in q.hang
        assert if_delta(q)[at(vs, x=3, y=3)] == s.empty()
        assert do_delta(q)[at(vs, x=6, y=4)] == s.set([at(vs, x=2, y=2)])
        assert do_delta(q)[at(vs, x=5, y=0)] == s.empty()

    def test_gcd_hang_set_is_open_axes(self, gcd):
        vs, q = gcd
        axes = {at(vs, x=v, y=0) for v in range(1, 8)} | {at(vs, x=0, y=v) for v in range(1, 8)}
        assert set(q.hang) == axes

    def test_gcd_wp_if(self, gcd):
        vs, q = gcd
        a = vs.states.set(i for i in range(vs.size) if sum(vs.decode(i).values()) == 6)
        got = wp_if(q, a)
        assert frozenset(got) == if_oracle(q, frozenset(a))
        # (6,0) stays put on the line, (4,1) steps off it to (3,1)
        assert at(vs, x=6, y=0) in got and at(vs, x=4, y=1) not in got

    def test_gcd_wp_do(self, gcd):
        vs, q = gcd
        diag = vs.states.set(i for i in range(vs.size) if len(set(vs.decode(i).values())) == 1)
        got = wp_do(q, diag)
        expected = {at(vs, x=x, y=y) for x in range(1, 8) for y in range(1, 8)} | {at(vs, x=0, y=0)}
        assert set(got) == expected
        assert frozenset(got) == loop_oracle(q, frozenset(diag))

    def test_stop_or_count_quilt(self):
        vs, q = stop_or_count_quilt(8)
        s = vs.states
        assert quilt_delta(q) == stop_or_count(8)
        assert quilt_delta(q)[at(vs, x=3, y=1)] == s.set([at(vs, x=3, y=0), at(vs, x=4, y=1)])
        assert do_delta(q)[at(vs, x=3, y=1)] == s.set(at(vs, x=v, y=0) for v in range(3, 8))
        low = s.set(at(vs, x=v, y=0) for v in range(6))
        assert wp_do(q, low) == low
        assert frozenset(wp_do(q, low)) == loop_oracle(q, frozenset(low))


class TestIdentities:
    @pytest.mark.parametrize("seed", range(40))
    def test_point_set_identities(self, seed):
        rng = random.Random(seed)
        q = random_quilt(rng, rng.randint(1, 20))
        dq, di, dd = quilt_delta(q), if_delta(q), do_delta(q)
        space = q.space
        outside = ~q.guard
        assert analyze(dq).dyn == space.full()
        assert fixed_points(dq) == outside | q.hang
        assert analyze(di).dyn == q.guard
        assert fixed_points(di) == q.hang
        assert q.hang <= q.guard
        assert analyze(dd).dyn == basin(dq, outside)
        assert fixed_points(dd) == outside
        assert apply(dd, space.full()) <= outside
        assert q.hang.isdisjoint(analyze(dd).dyn)

    @pytest.mark.parametrize("seed", range(60))
    def test_wp_if_two_routes(self, seed):
        rng = random.Random(1000 + seed)
        q = random_quilt(rng, rng.randint(1, 16))
        for _ in range(10):
            a = q.space.set(x for x in range(len(q.space)) if rng.random() < 0.5)
            assert wp_if(q, a) == wp_if_patchwise(q, a) == inverse(if_delta(q), a)
            assert frozenset(wp_if(q, a)) == if_oracle(q, frozenset(a))

    def test_single_patch_wp_if(self):
        space = StateSpace.of_size(6)
        p = Patch.build(space.set([0, 2, 4]), lambda x: (x + 3) % 6)
        q = Quilt(space, [p])
        for a in space.subsets():
            pre = space.set(x for x in p.domain if p.transition[x] in a)
            assert wp_if(q, a) == pre

    @pytest.mark.parametrize("seed", range(60))
    def test_wp_do_triple_and_oracle(self, seed):
        rng = random.Random(5000 + seed)
        q = random_quilt(rng, rng.randint(1, 24))
        n = len(q.space)
        for _ in range(5):
            a = q.space.set(x for x in range(n) if rng.random() < 0.6)
            hs = wp_do_iterates(q, a)
            assert len(hs) <= n + 1
            assert all(lo <= hi for lo, hi in zip(hs, hs[1:]))
            assert hs[0] == a - q.guard
            got = wp_do(q, a)
            assert got == inverse(do_delta(q), a) == basin(quilt_delta(q), a - q.guard)
            assert frozenset(got) == loop_oracle(q, frozenset(a))


class TestTheoremCheckers:
    def test_alternative_examples(self, gcd):
        vs, q = gcd
        s = vs.states
        a = s.set(i for i in range(vs.size) if vs.decode(i)["x"] > vs.decode(i)["y"] > 0)
        b = apply(if_delta(q), a)
        assert check_alternative(q, a, b).status == "pass"
        assert check_alternative(q, s.empty(), s.empty()).status == "pass"
        v = check_alternative(q, s.set([at(vs, x=3, y=3)]), s.full())
        assert v.status == "hypothesis-not-met" and v.witness == at(vs, x=3, y=3)
        v = check_alternative(q, a, s.empty())
        assert v.status == "hypothesis-not-met" and v.ok

    def test_invariance_examples(self, gcd):
        vs, q = gcd
        s = vs.states
        v = s.set(i for i in range(vs.size) if gcd_value(*vs.decode(i).values()) == 2)
        assert check_invariance(q, v).status == "pass"
        conclusion = apply(do_delta(q), v & convergent_points(quilt_delta(q)))
        assert conclusion == s.set([at(vs, x=2, y=2)])
        assert conclusion <= v - q.guard
        assert check_invariance(q, s.full()).status == "pass"
        assert check_invariance(q, s.empty()).status == "pass"
        small = s.set([at(vs, x=6, y=4)])
        verdict = check_invariance(q, small)
        assert verdict.status == "hypothesis-not-met" and verdict.witness == at(vs, x=6, y=4)

    def test_forced_hypotheses(self):
        rng = random.Random(77)
        for _ in range(150):
            q = random_quilt(rng, rng.randint(1, 16))
            n = len(q.space)
            di = if_delta(q)
            a = q.space.set(x for x in q.guard if rng.random() < 0.5)
            b = apply(di, a) | q.space.set(x for x in range(n) if rng.random() < 0.2)
            assert check_alternative(q, a, b).status == "pass"
            v = q.space.set(x for x in range(n) if rng.random() < 0.3)
            while True:
                grown = v | apply(di, v & q.guard)
                if grown == v:
                    break
                v = grown
            assert check_invariance(q, v).status == "pass"
