"""Smoke test for the confined2d_py extension module.

Build and install first, e.g. `maturin develop --release` in crates/python,
then run `python python/smoke_test.py`.
"""

import math

import confined2d_py as c2d


def close(a, b, tol):
    assert abs(a - b) <= tol, (a, b)


def main():
    o = c2d.Orbital("1s", 1.0)
    close(o.energy, -1.34601, 5e-3)
    assert o.state == "1s" and not o.constrained
    close(o.radial(1.0), 0.0, 1e-15)

    pos = o.position_density()
    mom = o.momentum_density()
    close(pos.norm, 1.0, 1e-10)
    assert mom.norm_defect <= 1e-6
    assert pos.shannon() + mom.shannon() >= c2d.SHANNON_SUM_BOUND - 1e-6
    m = mom.measures()
    assert m["complexity_fs"] >= 2 - 1e-6 and m["complexity_lmc"] >= 1 - 1e-6

    free = c2d.measure_record("1s", 30.0)
    close(free["S_pos"], 2 + math.log(math.pi / 8), 0.01)
    close(free["F_pos"], 16.0, 0.16)
    assert free["flags"] == []

    rows = c2d.sweep(["2p", "1s"], [2.0, 1.0])
    assert [(r["state"], r["r0"]) for r in rows] == [("1s", 1.0), ("1s", 2.0), ("2p", 1.0), ("2p", 2.0)]
    assert rows[2]["F_prod"] is None

    r_star, lo, hi = c2d.inversion()
    assert 0.9 < r_star < 1.0 and hi - lo <= 0.005
    try:
        c2d.crossover("1s")
    except RuntimeError as e:
        assert "no sign change" in str(e)
    else:
        raise AssertionError("1s should have no cross-over")

    try:
        c2d.Orbital("4x", 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("bad label accepted")

    close(c2d.bessel_j(0, 0.0), 1.0, 0.0)
    close(c2d.free_energy(2), -2 / 9, 1e-15)
    table = c2d.reference_table()
    assert len(table) == 64
    assert all(abs(r["deviation"]) <= 5e-3 * max(1, abs(r["reference"])) for r in table)
    print("smoke test passed")


if __name__ == "__main__":
    main()
