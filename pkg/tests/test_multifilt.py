import itertools
import random
from fractions import Fraction

import pytest

from slopekit import linalg
from slopekit.multifilt import (
    Filtration,
    MultifilteredSpace,
    dual_mf,
    inequality_suite,
    is_semistable_mf,
    mu_max_mf,
    multigraded_dims,
    nu_witness,
    quotient_object,
    slope_faltings,
    slope_filtration_mf,
    slope_of_subspace,
    subobject,
    tensor_mf,
    unit_object,
)

F = Fraction


def crossed_example():
    """dim 2; filtration 1 jumps on span(e1) at 1, filtration 2 on span(e2)."""
    full = [[1, 0], [0, 1]]
    f1 = Filtration(2, [(0, full), (1, [[1, 0]])])
    f2 = Filtration(2, [(0, full), (1, [[0, 1]])])
    return MultifilteredSpace(2, [f1, f2])


def random_mf(rng, dim, n_filts, max_breaks=3, break_bound=3):
    filts = []
    for _ in range(n_filts):
        # random flag pieces at random distinct breaks
        while True:
            b = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(dim)]
            if linalg.rank(linalg.mat(b)) == dim:
                break
        n_steps = rng.randint(1, min(max_breaks, dim))
        breaks = sorted(rng.sample(range(-break_bound, break_bound + 1), n_steps))
        sizes = [dim]
        if n_steps > 1:
            sizes += sorted(rng.sample(range(1, dim), n_steps - 1), reverse=True)
        steps = [(F(lam), b[:size]) for lam, size in zip(breaks, sizes)]
        filts.append(Filtration(dim, steps))
    return MultifilteredSpace(dim, filts)


def test_filtration_validation():
    with pytest.raises(ValueError):
        Filtration(2, [(0, [[1, 0]])])  # lowest step not full
    with pytest.raises(ValueError):
        Filtration(2, [(0, [[1, 0], [0, 1]]), (0, [[1, 0]])])  # duplicate break
    with pytest.raises(ValueError):
        Filtration(2, [(0, [[1, 0], [0, 1]]), (1, [[1, 0]]), (2, [[0, 1]])])  # not decreasing
    f = Filtration(2, [(0, [[1, 0], [0, 1]]), (1, [[2, 0]])])
    assert f.steps[1][1] == ((F(1), F(0)),)  # rref-normalized


def test_weight_and_spaces():
    f = Filtration(2, [(0, [[1, 0], [0, 1]]), (1, [[1, 0]])])
    assert f.weight((1, 0)) == 1
    assert f.weight((0, 1)) == 0
    assert f.weight((1, 1)) == 0
    assert f.space_at(F(1)) == ((F(1), F(0)),)
    assert f.space_at(F(2)) == ()
    assert f.space_above(F(0)) == ((F(1), F(0)),)


def test_slope_examples():
    line = unit_object(1, [F(2)])
    assert slope_faltings(line) == 2
    m = crossed_example()
    assert slope_faltings(m) == 1
    shifted = MultifilteredSpace(
        2, [m.filtrations[0].shift(F(3)), m.filtrations[1]]
    )
    assert slope_faltings(shifted) == 1 + F(3, 1) * F(2, 2) / 1 - F(1, 1) * 0  # +3*dim/dim... see below
    assert slope_faltings(shifted) == slope_faltings(m) + 3


def test_multigraded_crossed():
    m = crossed_example()
    dims = multigraded_dims(m)
    assert dims == {(F(1), F(0)): 1, (F(0), F(1)): 1}


def test_multigraded_single_filtration():
    f = Filtration(3, [(0, linalg.identity(3)), (2, [[1, 0, 0], [0, 1, 0]]), (5, [[0, 1, 0]])])
    m = MultifilteredSpace(3, [f])
    dims = multigraded_dims(m)
    assert dims == {(F(0),): 1, (F(2),): 1, (F(5),): 1}


def test_multigraded_lemma_random():
    rng = random.Random(3)
    for _ in range(15):
        m = random_mf(rng, rng.randint(1, 5), rng.randint(1, 3))
        dims = multigraded_dims(m)  # internal asserts check the aggregate
        assert sum(dims.values()) == m.dim
        # aggregate equality for every permutation of the filtration order
        for order in itertools.permutations(range(m.n_filtrations)):
            d2 = multigraded_dims(m.permuted(order))
            agg = sum((sum(k) * v for k, v in d2.items()), F(0))
            assert agg == slope_faltings(m) * m.dim


def test_nu_witness_crossed():
    m = crossed_example()
    val, line = nu_witness(m)
    assert val == 1
    assert tuple(line) in {(F(1), F(0)), (F(0), F(1))}


def test_nu_witness_single():
    f = Filtration(2, [(0, linalg.identity(2)), (3, [[0, 1]])])
    m = MultifilteredSpace(2, [f])
    val, line = nu_witness(m)
    assert val == 3
    assert linalg.in_row_space(line, ((F(0), F(1)),))


def test_nu_between_mu_and_mu_max():
    rng = random.Random(7)
    for _ in range(12):
        m = random_mf(rng, rng.randint(1, 4), rng.randint(1, 3))
        val, line = nu_witness(m)
        assert val >= slope_faltings(m)
        res = mu_max_mf(m)
        assert val <= res.value or not res.certified
        # nu equals the maximal break-sum over nonzero multigraded pieces
        dims = multigraded_dims(m)
        assert val == max(sum(k) for k in dims)
        # the witness line really has slope = val
        assert slope_of_subspace(m, (line,)) == val


def test_mu_max_crossed_certified():
    m = crossed_example()
    res = mu_max_mf(m)
    assert res.certified
    assert res.value == 1 == res.upper
    assert is_semistable_mf(m)


def test_mu_max_single_filtration():
    f = Filtration(2, [(0, linalg.identity(2)), (3, [[0, 1]])])
    m = MultifilteredSpace(2, [f])
    res = mu_max_mf(m)
    assert res.certified
    assert res.value == 3
    assert res.witness == ((F(0), F(1)),)


def test_subobject_quotient_additivity():
    rng = random.Random(11)
    for _ in range(10):
        m = random_mf(rng, rng.randint(2, 4), rng.randint(1, 3))
        k = rng.randint(1, m.dim - 1)
        rows = tuple(
            tuple(F(rng.randint(-2, 2)) for _ in range(m.dim)) for _ in range(k)
        )
        rr = linalg.rref(linalg.mat(rows))[0]
        if not rr or len(rr) == m.dim:
            continue
        sub = subobject(m, rr)
        quot, _ = quotient_object(m, rr)
        lhs = slope_faltings(m) * m.dim
        rhs = slope_faltings(sub) * sub.dim + slope_faltings(quot) * quot.dim
        assert lhs == rhs


def test_tensor_unit_and_slope_additivity():
    m = crossed_example()
    u = unit_object(2)
    t = tensor_mf(m, u)
    assert slope_faltings(t) == slope_faltings(m)
    assert t.dim == m.dim
    rng = random.Random(13)
    for _ in range(8):
        m1 = random_mf(rng, rng.randint(1, 3), 2)
        m2 = random_mf(rng, rng.randint(1, 3), 2)
        t = tensor_mf(m1, m2)
        assert slope_faltings(t) == slope_faltings(m1) + slope_faltings(m2)


def test_tensor_crossed_square():
    m = crossed_example()
    t = tensor_mf(m, m)
    assert t.dim == 4
    assert slope_faltings(t) == 2
    res = mu_max_mf(t)
    assert res.certified and res.value == 2


def test_dual_negates_slope():
    rng = random.Random(17)
    for _ in range(10):
        m = random_mf(rng, rng.randint(1, 4), rng.randint(1, 3))
        d = dual_mf(m)
        assert slope_faltings(d) == -slope_faltings(m)
        assert dual_mf(d) == m


def test_theorem_tensor_mu_max_additive_small():
    rng = random.Random(19)
    done = 0
    for _ in range(30):
        if done >= 8:
            break
        m1 = random_mf(rng, rng.randint(1, 3), rng.randint(1, 3))
        m2 = random_mf(rng, rng.randint(1, 3), m1.n_filtrations)
        r1, r2 = mu_max_mf(m1), mu_max_mf(m2)
        if not (r1.certified and r2.certified):
            continue
        t = tensor_mf(m1, m2)
        seed_cand = [
            tuple(a * b for a in wa for b in wb)
            for wa in r1.witness
            for wb in r2.witness
        ]
        rt = mu_max_mf(t, extra_candidates=[seed_cand])
        if not rt.certified:
            continue
        assert rt.value == r1.value + r2.value
        done += 1
    assert done >= 5


def test_slope_filtration_semistable():
    m = crossed_example()
    chain = slope_filtration_mf(m)
    assert len(chain) == 1 and len(chain[0]) == 2


def test_slope_filtration_split():
    # direct sum of unit objects with breaks 3 and 0
    f = Filtration(2, [(0, linalg.identity(2)), (3, [[1, 0]])])
    m = MultifilteredSpace(2, [f])
    chain = slope_filtration_mf(m)
    assert len(chain) == 2
    assert chain[0] == ((F(1), F(0)),)
    assert len(chain[1]) == 2


def test_slope_filtration_matches_brute_force():
    rng = random.Random(23)
    for _ in range(5):
        m = random_mf(rng, rng.randint(2, 3), rng.randint(1, 2))
        try:
            chain = slope_filtration_mf(m)
        except ValueError:
            continue
        # breaks: piece slopes strictly decreasing, first = mu_max
        res = mu_max_mf(m)
        assert slope_of_subspace(m, chain[0]) == res.value


def test_inequality_suite_unit_objects():
    u = unit_object(2)
    rep = inequality_suite(("multifilt", u, u))
    assert rep.passed
    for c in rep.checks:
        if "bound" in c.name:
            assert "0" in c.detail


def test_inequality_suite_crossed():
    m = crossed_example()
    rep = inequality_suite(("multifilt", m, m))
    assert rep.passed


def test_inequality_suite_lattices():
    from slopekit.lattice import a2_lattice
    from fractions import Fraction as FF

    lat = a2_lattice().scale(FF(2, 3))
    rep = inequality_suite(("lattice", lat, lat))
    assert rep.passed


def test_json_roundtrip():
    m = crossed_example()
    back = MultifilteredSpace.from_json_dict(m.to_json_dict())
    assert back == m


def naive_profile_bound(m):
    """Independent unpruned re-implementation of the profile relaxation."""
    n = m.n_filtrations
    steps = [f.steps for f in m.filtrations]
    best = None
    for k in range(1, m.dim + 1):
        per_v = []
        for v in range(n):
            brks = [lam for lam, _ in steps[v]]
            adims = [len(s) for _, s in steps[v]]
            profs = []

            def rec(i, prev, acc):
                if i == len(brks):
                    profs.append(tuple(acc))
                    return
                if i == 0:
                    rng_vals = [k]
                else:
                    lo = max(0, prev - (adims[i - 1] - adims[i]))
                    hi = min(prev, adims[i], k)
                    rng_vals = range(lo, hi + 1)
                for d in rng_vals:
                    acc.append(d)
                    rec(i + 1, d, acc)
                    acc.pop()

            rec(0, k, [])
            per_v.append(profs)
        for combo in itertools.product(*per_v):
            ok = True
            for v in range(n):
                for w in range(v + 1, n):
                    for i, d in enumerate(combo[v]):
                        for j, e in enumerate(combo[w]):
                            cap = len(
                                linalg.intersect_row_spaces(
                                    steps[v][i][1], steps[w][j][1], m.dim
                                )
                            )
                            if d + e - k > cap:
                                ok = False
            if not ok:
                continue
            total = F(0)
            for v in range(n):
                brks = [lam for lam, _ in steps[v]]
                prof = combo[v]
                for t_i in range(len(prof)):
                    nxt = prof[t_i + 1] if t_i + 1 < len(prof) else 0
                    total += brks[t_i] * (prof[t_i] - nxt)
            val = total / k
            if best is None or val > best:
                best = val
    return best


def test_profile_bound_matches_naive_enumeration():
    from slopekit.multifilt import _profile_upper_bound

    rng = random.Random(37)
    for _ in range(8):
        m = random_mf(rng, rng.randint(1, 3), rng.randint(1, 2))
        assert _profile_upper_bound(m) == naive_profile_bound(m)
    assert _profile_upper_bound(crossed_example()) == naive_profile_bound(crossed_example()) == 1


def test_slope_filtration_subquotient_rederivation():
    """Chain piece slopes re-derived through explicit sub/quotient objects."""
    from slopekit.multifilt import quotient_object, subobject

    rng = random.Random(41)
    checked = 0
    for _ in range(12):
        m = random_mf(rng, rng.randint(2, 3), rng.randint(1, 2))
        try:
            chain = slope_filtration_mf(m)
        except ValueError:
            continue
        prev = None
        prev_slope = None
        for rows in chain:
            if prev is None:
                piece_slope = slope_faltings(subobject(m, rows))
            else:
                quot, completion = quotient_object(m, prev)
                # image of rows in the quotient
                from slopekit.multifilt import _quotient_data

                _, project = _quotient_data(m.dim, prev)
                imgs = [p for p in (project(r) for r in rows) if any(p)]
                piece_slope = slope_of_subspace(quot, tuple(imgs))
            if prev_slope is not None:
                assert piece_slope < prev_slope
            prev_slope = piece_slope
            prev = rows
        checked += 1
    assert checked >= 8


def test_slope_filtration_breaks_match_candidate_polygon():
    """Chain piece slopes equal the upper-hull slopes of the per-dimension
    best degrees over an exhaustive candidate family (brute-force oracle)."""
    from slopekit.multifilt import _candidate_family

    rng = random.Random(47)
    checked = 0
    for _ in range(14):
        m = random_mf(rng, rng.randint(2, 4), rng.randint(1, 2))
        try:
            chain = slope_filtration_mf(m)
        except ValueError:
            continue
        cands = _candidate_family(m, (), seed=0, rand_count=12, cap=400)
        best_deg = {}
        for rows in cands:
            k = len(rows)
            deg = slope_of_subspace(m, rows) * k
            if k not in best_deg or deg > best_deg[k]:
                best_deg[k] = deg
        pts = [(0, F(0))] + sorted(best_deg.items())
        hull = [(0, F(0))]
        for pt in pts[1:]:
            while len(hull) >= 2:
                (x0, y0), (x1, y1) = hull[-2], hull[-1]
                if (y1 - y0) * (pt[0] - x1) <= (pt[1] - y1) * (x1 - x0):
                    hull.pop()
                else:
                    break
            hull.append(pt)
        hull_slopes = [
            (y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(hull, hull[1:])
        ]
        chain_slopes = []
        prev_rows = None
        prev_deg = F(0)
        for rows in chain:
            deg = slope_of_subspace(m, rows) * len(rows)
            chain_slopes.append((deg - prev_deg) / (len(rows) - (len(prev_rows) if prev_rows else 0)))
            prev_rows, prev_deg = rows, deg
        assert chain_slopes == hull_slopes
        checked += 1
    assert checked >= 10
