import random
from fractions import Fraction as F

import pytest

from toric_sarkisov.corpus import corpus, hirzebruch, p1xp1, projective_line, projective_plane, small_resolution
from toric_sarkisov.divisors import canonical_divisor, is_nef, principal_divisor, pullback, pushforward
from toric_sarkisov.exact import dot
from toric_sarkisov.fan import Fan, FanError, ToricModel, is_projective, picard_number
from toric_sarkisov.mmp import (
    EngineError,
    MMPTrace,
    ample_model,
    contract,
    flip,
    mori_cone,
    prefer_kind,
    run_mmp,
    verify_output,
)

CORPUS = corpus()
F1 = hirzebruch(1)
P2_BELOW_F1 = Fan.make([(1, 0), (-1, 1), (0, -1)], [(0, 1), (1, 2), (0, 2)])


def _ray_by_kind(X, kind):
    for R in mori_cone(X):
        jm = len(R.j_minus)
        if {"fiber": 0, "divisorial": 1, "small": 2}[kind] == min(jm, 2):
            return R
    raise AssertionError(kind)


def test_mori_cone_sizes():
    assert len(mori_cone(ToricModel.birational(projective_plane()))) == 1
    assert len(mori_cone(ToricModel.birational(p1xp1()))) == 2
    assert len(mori_cone(ToricModel.birational(F1))) == 2


def test_contract_f1_exceptional_curve():
    step = contract(F1, _ray_by_kind(ToricModel.birational(F1), "divisorial"))
    assert step.kind == "divisorial"
    assert step.target.fan.key == P2_BELOW_F1.key


def test_contract_f1_fibration():
    step = contract(F1, _ray_by_kind(ToricModel.birational(F1), "fiber"))
    assert step.kind == "fiber"
    assert step.target.dim == 1 and len(step.target.fan.rays) == 2
    assert step.target.fan.key == projective_line().key


def test_contract_small_on_resolved_cone():
    X = ToricModel.birational(small_resolution(0))
    R = _ray_by_kind(X, "small")
    step = contract(X, R)
    assert step.kind == "small" and len(R.j_minus) == 2 and len(R.j_plus) == 2
    assert any(len(c) == 4 for c in step.target.fan.cones)


def test_contract_rejects_non_extremal():
    X = ToricModel.birational(small_resolution(0))
    R = mori_cone(X)[0]
    bogus = type(R)(tuple(2 * x + 1 for x in R.relation), R.walls)
    with pytest.raises(FanError):
        contract(X, bogus)


def test_flip_swaps_the_diagonal_and_is_an_involution():
    X = ToricModel.birational(small_resolution(0))
    step = contract(X, _ray_by_kind(X, "small"))
    Y = flip(X, step)
    assert Y.fan.key == small_resolution(1).key
    step2 = contract(Y, _ray_by_kind(Y, "small"))
    assert flip(Y, step2).fan.key == X.fan.key


def test_flip_rejects_other_kinds():
    X = ToricModel.birational(F1)
    step = contract(X, _ray_by_kind(X, "fiber"))
    with pytest.raises(FanError):
        flip(X, step)


def test_run_mmp_p2_canonical():
    tr = run_mmp(projective_plane(), canonical_divisor(projective_plane()))
    assert tr.is_mfs and [s.kind for s in tr.steps] == ["fiber"] and tr.base.dim == 0
    assert verify_output(tr).ok


def test_run_mmp_f1_both_outputs_verify():
    K = canonical_divisor(F1)
    a = run_mmp(F1, K, strategy=prefer_kind("divisorial"))
    b = run_mmp(F1, K, strategy=prefer_kind("fiber"))
    assert [s.kind for s in a.steps] == ["divisorial", "fiber"] and a.base.dim == 0
    assert [s.kind for s in b.steps] == ["fiber"] and b.base.dim == 1
    assert verify_output(a).ok and verify_output(b).ok


def test_run_mmp_nef_is_minimal_model():
    tr = run_mmp(p1xp1(), [1, 1, 0, 0])
    assert tr.outcome == "minimal_model" and tr.steps == ()
    assert verify_output(tr).ok


def test_flip_run_on_resolved_cone():
    X = small_resolution(0)
    d = [F(1), F(0), F(1), F(0), F(0)]  # negative on the diagonal class v1 + v3 - v0 - v2
    tr = run_mmp(X, d, strategy=prefer_kind("small"))
    assert tr.steps[0].kind == "flip"
    rep = verify_output(tr)
    assert rep.ok, rep.details


def test_iteration_cap_is_an_engine_error():
    with pytest.raises(EngineError):
        run_mmp(F1, canonical_divisor(F1), max_steps=1, strategy=prefer_kind("divisorial"))


def test_verify_flags_a_trivial_contraction():
    X = ToricModel.birational(F1)
    H = pullback(F1, P2_BELOW_F1, [1, 0, 0])
    step = contract(X, _ray_by_kind(X, "divisorial"))
    Y = step.result
    tr = MMPTrace(X, H, (step,), "minimal_model", Y, pushforward(F1, Y.fan, H))
    rep = verify_output(tr)
    assert not rep.ok and not rep.clauses["d_negative"]


def test_ample_model_examples():
    P2 = projective_plane()
    am = ample_model(P2, [1, 1, 1])
    assert am.model.fan.key == P2.key and am.polytope_dim == 2
    H = pullback(F1, P2_BELOW_F1, [1, 0, 0])
    assert ample_model(F1, H).model.fan.key == P2_BELOW_F1.key
    E = [0, 1, 0, 0]
    assert ample_model(F1, E).model.dim == 0
    fibre = [1, 0, 0, 0]
    am = ample_model(F1, fibre)
    assert am.model.dim == 1 and am.model.fan.key == projective_line().key


def test_ample_model_not_pseudo_effective():
    with pytest.raises(FanError, match="not pseudo-effective"):
        ample_model(projective_plane(), [-1, 0, 0])


def test_ample_model_invariant_under_linear_equivalence():
    rng = random.Random(3)
    for name, f in CORPUS.items():
        for _ in range(5):
            d = [F(rng.randint(0, 6), rng.randint(1, 3)) for _ in f.rays]
            m = [rng.randint(-3, 3) for _ in range(f.rank)]
            d2 = [a + b for a, b in zip(d, principal_divisor(f, m))]
            assert ample_model(f, d).model.key == ample_model(f, d2).model.key, name


def test_ample_divisor_gives_identity():
    for f in CORPUS.values():
        X = ToricModel.birational(f)
        A = is_projective(f).support_values
        am = ample_model(X, A)
        assert am.model.key == X.key
        assert is_nef(am.model, am.divisor)


def test_random_runs_respect_divisorial_bound():
    rng = random.Random(11)
    for name, f in CORPUS.items():
        for seed in range(4):
            d = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in f.rays]
            tr = run_mmp(f, d, strategy="seeded-random", seed=seed)
            assert sum(s.kind == "divisorial" for s in tr.steps) <= picard_number(f) - 1
            assert verify_output(tr).ok, (name, d)
            for s in tr.steps:
                assert dot(s.relation, s.divisor) < 0
