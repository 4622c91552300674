import math

import pytest

import qrvc


def legendre(a, q):
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def test_field_and_tables():
    f = qrvc.make_field(7)
    assert f.generator in (3, 5)
    assert sorted(f.primitive_roots()) == [3, 5]
    assert qrvc.residue_table(f, 2, 1, "zero-out").members == [1, 2, 4]
    assert qrvc.residue_table(f, 2, 3, "zero-out").members == [3, 5, 6]
    assert qrvc.squares(qrvc.make_field(5), "zero-in").members == [0, 1, 4]
    with pytest.raises(qrvc.Error):
        qrvc.make_field(9)


def test_shattering():
    s5 = qrvc.squares(qrvc.make_field(5), "zero-in")
    y = qrvc.Subset(5, [1, 0])
    assert y.elems == [0, 1]
    assert qrvc.pattern_counts(y, s5) == [1, 1, 1, 2]
    assert qrvc.is_shattered(y, s5)
    assert qrvc.shattering_index(y, s5) == 0
    s7 = qrvc.squares(qrvc.make_field(7), "zero-in")
    assert not qrvc.is_shattered(qrvc.Subset(7, [0, 1, 2, 3]), s7)
    with pytest.raises(qrvc.Error):
        qrvc.Subset(7, [1, 1])


def test_fold_matches_prefix():
    table = qrvc.squares(qrvc.make_field(101), "zero-in")
    full = qrvc.realized_patterns(qrvc.Subset(101, list(range(6))), table)
    assert qrvc.fold_patterns(full) == qrvc.realized_patterns(qrvc.Subset(101, list(range(5))), table)


def test_search():
    assert qrvc.vc_dimension(5)["vcdim"] == 2
    res = qrvc.vc_dimension(61, convention="strict", jobs=2)
    table = qrvc.squares(qrvc.make_field(61), "strict")
    assert qrvc.is_shattered(qrvc.Subset(61, res["witness"]), table)
    assert len(res["witness"]) == res["vcdim"]
    assert qrvc.testing_dimension(101, cap=3) == 3
    assert qrvc.longest_shattered_ap(5) == 2
    early = qrvc.vc_dimension(257, early_exit_at=7)
    assert early["vcdim"] >= 7 and early["lower_bound"]


def test_monte_carlo_reproducible():
    a = qrvc.estimate_p(101, 4, trials=300, seed=9)
    b = qrvc.estimate_p(101, 4, trials=300, seed=9, jobs=3)
    assert a["hits"] == b["hits"]
    assert qrvc.estimate_p(101, 2, trials=100, seed=1)["p_hat"] == 1.0
    assert qrvc.estimate_p(101, 7, trials=50, seed=1)["hits"] == 0


def test_character_checks():
    direct = sum(legendre(-x * (1 - x), 7) for x in range(7))
    s = qrvc.char_sum(7, 2, qrvc.Subset(7, [0, 1]), [1, 1])
    assert s.real == pytest.approx(direct)
    assert abs(s) <= math.sqrt(7) + 1e-9
    rows = qrvc.verify_weil(13, 3, 2)
    assert rows and all(r["violations"] == 0 for r in rows)
    assert all(r["violations"] == 0 for r in qrvc.verify_equidistribution(101, 2, 3, samples=100, seed=1))
    assert all(r["violations"] == 0 for r in qrvc.verify_fourier_identity(31, 3, 3, samples=20, seed=1))
    rep = qrvc.verify_shattering_theorem(997)
    assert rep["n_star"] == 3 and rep["passed"]
