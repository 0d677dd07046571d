from fractions import Fraction as F
from itertools import combinations
from math import comb
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from kelleyscope.algebra import dumps_family
from kelleyscope.errors import DomainError
from kelleyscope.generators import IdealSpec, InstanceSpec, Stream, generate, harmonic, ideal_truncation
from kelleyscope.mn import mn_min_cover
from kelleyscope.sweep import Analysis, rows_to_csv, run_sweep

GOLDEN = Path(__file__).parent / "golden"


def test_atoms_and_ksubsets():
    assert generate(InstanceSpec("atoms", {"n": 3})).atom_lists() == [[0], [1], [2]]
    assert generate(InstanceSpec("ksubsets", {"n": 3, "k": 2})).atom_lists() == [[0, 1], [0, 2], [1, 2]]


@pytest.mark.parametrize("n", range(1, 8))
def test_catalog_counts(n):
    for k in range(1, n + 1):
        assert len(generate(InstanceSpec("ksubsets", {"n": n, "k": k}))) == comb(n, k)
    # intervals [i, j) with 0 <= i < j <= n
    assert len(generate(InstanceSpec("intervals", {"n": n}))) == n * (n + 1) // 2


def test_random_golden():
    spec = InstanceSpec("random", {"n": 6, "m": 5, "p": "1/2"}, 42)
    text = dumps_family(generate(spec))
    assert text == (GOLDEN / "random_n6_m5_p1-2_seed42.json").read_text()
    assert dumps_family(generate(spec)) == text


def test_stream_is_pcg64_raw():
    import numpy as np

    s = Stream(7)
    ref = np.random.PCG64(7)
    assert [s.u64() for _ in range(5)] == [int(ref.random_raw()) for _ in range(5)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 8), st.integers(0, 6), st.fractions(F(1, 10), 1))
def test_random_kind_is_deterministic(seed, n, m, p):
    spec = InstanceSpec("random", {"n": n, "m": m, "p": str(p)}, seed)
    assert generate(spec) == generate(spec)
    assert len(generate(spec)) == m


def test_measure_threshold_sizes():
    f = generate(InstanceSpec("measure_threshold", {"n": 8, "m": 20, "delta": "3/8"}, 1))
    assert len(f) == 20 and all(len(a) >= 3 for a in f)


@pytest.mark.parametrize(
    "spec",
    [
        InstanceSpec("ksubsets", {"n": 3, "k": 4}),
        InstanceSpec("random", {"n": 3, "m": 2, "p": "0/1"}),
        InstanceSpec("random", {"n": 3, "m": 2, "p": 0.5}),
        InstanceSpec("atoms", {}),
        InstanceSpec("measure_threshold", {"n": 3, "m": 2, "delta": "3/2"}),
    ],
)
def test_invalid_params(spec):
    with pytest.raises(DomainError):
        generate(spec)


def test_invalid_spec_fields():
    with pytest.raises(DomainError):
        InstanceSpec("nonsense")
    with pytest.raises(DomainError):
        InstanceSpec("atoms", {"n": 2}, -1)


def test_density_structured():
    ideal = IdealSpec("density", 4, d=F(1, 2))
    assert ideal_truncation(ideal, budget=6).atom_lists() == [list(c) for c in combinations(range(4), 2)]
    assert ideal_truncation(ideal, budget=0).atom_lists() == [[0, 1], [1, 2], [2, 3]]


def test_density_fallback_adds_samples():
    f = ideal_truncation(IdealSpec("density", 10, d=F(1, 2)), budget=5, seed=3)
    assert len(f) == 6 + 5
    assert all(len(a) >= 5 for a in f)


def test_summable_bound_error():
    theta = F(1) + F(1, 2) + F(1, 3) + F(1, 4) + 1
    with pytest.raises(DomainError, match="theta"):
        IdealSpec("summable", 4, theta=theta)
    assert harmonic(4) == F(25, 12)


def test_summable_minimal_sets():
    ideal = IdealSpec("summable", 6, theta=F(3, 2))
    f = ideal_truncation(ideal, budget=40)
    w = [F(1, i + 1) for i in range(6)]
    # oracle: every inclusion-minimal positive subset of [0, 6) by brute force
    minimal = []
    for mask in range(1, 64):
        s = [i for i in range(6) if mask >> i & 1]
        if sum(w[i] for i in s) >= ideal.theta and all(sum(w[i] for i in s if i != j) < ideal.theta for j in s):
            minimal.append(s)
    assert sorted(f.atom_lists()) == sorted(minimal)


def test_grid_proxy():
    ideal = IdealSpec("grid", 3, c=2, r=2)
    f = ideal_truncation(ideal, budget=1000)
    assert len(f) == comb(3, 2) * comb(3, 2) ** 2
    blocks = ideal_truncation(ideal, budget=4, seed=1)
    assert blocks.atom_lists()[:4] == [[0, 1, 3, 4], [1, 2, 4, 5], [3, 4, 6, 7], [4, 5, 7, 8]]
    with pytest.raises(DomainError):
        IdealSpec("grid", 3, c=4, r=1)


@pytest.mark.parametrize("name, kw", [("density", {"d": F(1, 3)}), ("summable", {"theta": F(2)}), ("grid", {"c": 2, "r": 2})])
@pytest.mark.parametrize("mode", ["structured", "sampled"])
def test_truncations_satisfy_proxy(name, kw, mode):
    ideal = IdealSpec(name, 6, **kw)
    f = ideal_truncation(ideal, mode, budget=12, seed=17)
    assert len(f) > 0
    assert all(ideal.is_positive(a.atoms) for a in f)


def test_sampled_needs_budget():
    with pytest.raises(DomainError):
        ideal_truncation(IdealSpec("density", 4, d=F(1, 2)), "sampled", budget=0)


def test_ideal_via_generate():
    spec = InstanceSpec("ideal_truncation", {"ideal": "density", "d": "1/2", "N": 4, "budget": 6})
    assert len(generate(spec)) == 6


def test_sweep_density():
    tmpl = InstanceSpec("ideal_truncation", {"ideal": "density", "d": "1/2", "N": 1, "budget": 100})
    rows = run_sweep(tmpl, range(4, 7))
    assert [r["value"] for r in rows] == ["1/2", "3/5", "1/2"]


def test_sweep_atoms_csv():
    rows = run_sweep(InstanceSpec("atoms", {"n": 1}), range(2, 6))
    assert [r["value"] for r in rows] == ["1/2", "1/3", "1/4", "1/5"]
    lines = rows_to_csv(rows).splitlines()
    assert lines[0] == "N,status,value_num,value_den,value_approx,k,mode,ms"
    assert lines[1].startswith("2,ok,1,2,0.500000,,inum,")


def test_sweep_singleton_mn():
    # density 99/100 below N = 100 leaves only the whole truncation: a singleton family
    tmpl = InstanceSpec("ideal_truncation", {"ideal": "density", "d": "99/100", "N": 1, "budget": 5})
    rows = run_sweep(tmpl, range(1, 6), Analysis("mn", F(1, 2)))
    assert [r["k"] for r in rows] == [1] * 5
    assert all(r["mode"] == "exact" for r in rows)


def test_sweep_flags_bad_rows():
    tmpl = InstanceSpec("ideal_truncation", {"ideal": "summable", "theta": "2", "N": 1, "budget": 10})
    rows = run_sweep(tmpl, range(2, 6))
    statuses = [r["status"] for r in rows]
    # H_N >= 2 first at N = 4
    assert statuses == ["error", "error", "ok", "ok"]
    assert "theta" in rows[0]["error"]


def test_sweep_jobs_invariant():
    tmpl = InstanceSpec("random", {"n": 5, "m": 6, "p": "1/2"}, 9)
    assert run_sweep(tmpl, range(2, 7), jobs=1) == run_sweep(tmpl, range(2, 7), jobs=4)
