import random

import pytest

from skewci.colorcore import RingSpec
from skewci.resolve import ModulePresentation
from skewci.support import (
    RationalityError,
    ThetaAlgebra,
    arc_check,
    complexity,
    compute_t,
    is_perfect,
    poincare_series,
    support_variety,
    support_variety_full,
)

from fixtures import (
    example_ring,
    hypersurface_ring,
    skew_hypersurface_ring,
    three_var_ring,
)


def test_compute_t_example_ring():
    assert compute_t(example_ring()) == 2


def test_compute_t_trivial_q():
    assert compute_t(hypersurface_ring()) == 1


def test_compute_t_order_three():
    spec = RingSpec(2, 3, [[0, 1], [-1, 0]], relations=["x1^3", "x2^3"])
    assert compute_t(spec) == 3


def test_theta_algebra_validates():
    spec = example_ring()
    alg = ThetaAlgebra(spec)
    assert alg.t == 2
    assert alg.names == ("th1", "th2")
    with pytest.raises(ValueError):
        ThetaAlgebra(spec, 1)


def test_support_example_module():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    report = support_variety(m, "k")
    assert report.t == 2
    assert report.ideal == ["th2"]
    assert report.dimension == 1
    assert not report.proj_empty


def test_support_residue_field_is_full():
    spec = example_ring()
    k = ModulePresentation.residue_field(spec)
    report = support_variety(k, k)
    assert report.ideal == []
    assert report.dimension == 2


def test_support_free_module_empty():
    spec = example_ring()
    r = ModulePresentation.free(spec)
    report = support_variety(r, "k")
    assert report.proj_empty
    assert report.dimension == 0


def test_support_symmetry_on_pairs():
    spec = example_ring()
    mods = [
        ModulePresentation.cyclic(spec, ["x1"]),
        ModulePresentation.cyclic(spec, ["x2"]),
        ModulePresentation.cyclic(spec, ["x1", "x2"], name="k2"),
        ModulePresentation.residue_field(spec),
        ModulePresentation.free(spec),
    ]
    for a in mods:
        for b in mods:
            r1 = support_variety(a, b)
            r2 = support_variety(b, a)
            assert sorted(r1.ideal) == sorted(r2.ideal), (a.name, b.name)
            assert r1.dimension == r2.dimension


def test_support_intersection_identity():
    # V(M,k) cap V(N,k) computed directly equals the pair report
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    n = ModulePresentation.cyclic(spec, ["x2"])
    pair = support_variety(m, n)
    assert pair.ideal == ["th1", "th2"] or sorted(pair.ideal) == ["th1", "th2"]
    assert pair.dimension == 0


def test_poincare_residue_field_example():
    spec = example_ring()
    k = ModulePresentation.residue_field(spec)
    series = poincare_series(k)
    # (1+t)^2/(1-t^2)^2
    assert series.cprime == 2
    assert series.numerator == [1, 2, 1]
    assert series.method == "exact-theta"


def test_poincare_residue_field_three_var():
    spec = three_var_ring()
    k = ModulePresentation.residue_field(spec)
    series = poincare_series(k)
    assert series.cprime == 2
    assert series.numerator == [1, 3, 3, 1]


def test_poincare_residue_field_hypersurface():
    spec = hypersurface_ring()
    k = ModulePresentation.residue_field(spec)
    series = poincare_series(k)
    assert series.cprime == 1
    assert series.numerator == [1, 1]


def test_poincare_rx_after_cancellation():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    series = poincare_series(m)
    # Betti numbers 1,1,1,...: P = 1/(1-t) = (1+t)/(1-t^2)
    assert series.cprime == 1
    assert series.numerator == [1, 1]
    assert series.coefficients(6) == [1] * 7


def test_poincare_free_module():
    spec = example_ring()
    series = poincare_series(ModulePresentation.free(spec))
    assert series.cprime == 0
    assert series.numerator == [1]


def test_complexity_of_k_is_c():
    for spec in (example_ring(), hypersurface_ring(), three_var_ring()):
        k = ModulePresentation.residue_field(spec)
        assert complexity(k, k) == spec.c


def test_complexity_examples():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    assert complexity(m, "k") == 1
    assert complexity(ModulePresentation.free(spec), "k") == 0


def test_complexity_symmetry_general_pair():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    n = ModulePresentation.cyclic(spec, ["x2"])
    window = {"cmax": 8, "dmax": 8}
    c1 = complexity(m, n, window=window)
    c2 = complexity(n, m, window=window)
    assert c1.value == c2.value == 0


def test_complexity_general_pair_nonzero():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    window = {"cmax": 8, "dmax": 8}
    c1 = complexity(m, m, window=window)
    c2 = complexity(m, "k")
    assert c1.value == c2.value == 1


def test_rationality_certificate():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    n = ModulePresentation.cyclic(spec, ["x2"])
    series = poincare_series(m, n, window={"cmax": 8, "dmax": 8})
    assert series.method == "fit"
    assert series.numerator_at_one() != 0
    assert all(isinstance(v, int) for v in series.numerator)


def test_fit_window_too_small_raises():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    with pytest.raises(RationalityError):
        poincare_series(m, m, window={"cmax": 3, "dmax": 6})


def test_is_perfect():
    spec = example_ring()
    assert is_perfect(ModulePresentation.free(spec))
    assert not is_perfect(ModulePresentation.residue_field(spec))
    assert not is_perfect(ModulePresentation.cyclic(spec, ["x1"]))


def test_is_perfect_finite_pd_module():
    spec = skew_hypersurface_ring()
    m = ModulePresentation.cyclic(spec, ["x2"])
    assert is_perfect(m)


def test_arc_check_pass_on_finite_pd():
    spec = skew_hypersurface_ring()
    m = ModulePresentation.cyclic(spec, ["x2"])  # pd 1
    report = arc_check(m, 1, 5)
    assert report.verdict == "pass"
    assert report.detail["pd"] == 1


def test_arc_check_free_module():
    spec = example_ring()
    report = arc_check(ModulePresentation.free(spec), 0, 4)
    assert report.verdict == "pass"
    assert report.detail["pd"] == 0


def test_arc_check_hypothesis_fails_for_k():
    spec = example_ring()
    k = ModulePresentation.residue_field(spec)
    report = arc_check(k, 1, 5)
    assert report.verdict == "hypothesis not satisfied"


def test_full_semantics_estimate():
    spec = example_ring()
    m = ModulePresentation.cyclic(spec, ["x1"])
    report = support_variety_full(m, degree_cap=8)
    assert report.semantics == "truncated-full"
    assert "th2" in report.ideal


def test_poincare_closed_form_on_random_rings():
    # P^R_k = (1+t)^n/(1-t^2)^c for every skew complete intersection,
    # independent of q and of the relation degrees
    from math import comb
    from fixtures import random_ring

    rng = random.Random(424242)
    for _ in range(6):
        spec = random_ring(rng, nmax=2, cmax=2)
        k = ModulePresentation.residue_field(spec)
        series = poincare_series(k)
        assert series.cprime == spec.c
        assert series.numerator == [comb(spec.n, j)
                                    for j in range(spec.n + 1)]
