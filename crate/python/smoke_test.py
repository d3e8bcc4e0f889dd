"""Smoke test for the redinv extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import redinv


def main():
    u, d, v = redinv.snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [d[i][i] for i in range(3)] == [2, 6, 12], d
    assert redinv.invariant_factors([[2, 0], [0, 3]]) == [1, 6]

    pgl3 = redinv.ReductiveGroup("PGL(3)")
    assert str(pgl3.picard()) == "Z/3"
    assert pgl3.characters().is_trivial()
    assert str(redinv.ReductiveGroup("PSO(8)").picard()) == "Z/2 + Z/2"
    assert redinv.ReductiveGroup("E6ad").picard().order == 3

    cohom = dict(redinv.ReductiveGroup("GL(3)").pi1d_cohomology("pushout"))
    assert str(cohom[-1]) == "Z" and cohom[0].is_trivial()
    verdict, method, checks = redinv.ReductiveGroup("PGL(3) xΓ:flip").compare_resolutions()
    assert verdict == "certified" and all(ok for _, ok, _ in checks), (verdict, method)

    z, z4 = redinv.AbelianGroup.free(1), redinv.AbelianGroup.cyclic(4)
    mult2 = redinv.Hom(z4, z4, [[2]])
    groups, exact = redinv.six_term_sequence(mult2, mult2)
    assert all(exact) and [str(g) for g in groups] == ["Z/2", "Z/4", "Z/2", "Z/2", "Z/4", "Z/2"]

    hs, checks = redinv.cech(z, z, [[3]])
    assert hs[0].is_trivial() and str(hs[1]) == "Z/3"
    assert all(ok for _, ok, _ in checks)

    assert str(redinv.group_cohomology_trivial("C4", 1, 2)) == "Z/4"
    assert len(redinv.catalog_names()) >= 15

    try:
        redinv.ReductiveGroup("not a group")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
    print("redinv smoke test: ok")


if __name__ == "__main__":
    main()
