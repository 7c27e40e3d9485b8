"""Quick check of the quadfib_py extension. Run after `maturin develop` or with the .so on sys.path."""
import math

import quadfib_py as q


def main():
    assert q.jacobi(2, 7) == 1
    assert q.jacobi(3, 7) == -1

    a = q.Quadric([1, 1, -1, -1])
    assert a.is_locally_soluble() and a.has_rational_point()
    pt = a.find_rational_point(5)
    assert pt is not None and sum(c * x * x for c, x in zip(a.coeffs, pt)) == 0

    b = q.Quadric([1, 1, 1, 1])
    assert not b.is_locally_soluble()
    assert ("inf", False, False) in b.places()

    try:
        q.Quadric([0, 1, 1, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("zero coefficient accepted")

    assert q.count_n(100) == 15216
    c = q.Counter(200)
    row = c.census(200)
    assert (row["N"], row["N1"], row["N2"], row["raw_count"]) == (59216, 22848, 13520, 236864)
    assert row["N"] == c.count_n(200)

    for r in (1, 2):
        assert q.indicator_via_charsum([1, 1, 1, 3], [1, 1, 1, 1], [0, 0, 0, 0], r) == \
            q.direct_indicator([1, 1, 1, 3], [1, 1, 1, 1], [0, 0, 0, 0], r)

    assert q.sigma(1, 2, [1, 1, 1, 1], [0, 0, 0, 0]) == 192
    assert q.sigma(2, 3, [1, 1, 1, 1], [0, 0, 0, 0]) == 64
    assert q.rho(1, 2) == (11968, 9)

    val, rad = q.leading_constant(10_000)
    assert abs(val - 4.158126904485457) < 1e-6 + rad, val
    lb = math.log(1000.0)
    assert math.isclose(q.main_term(1000.0, val), val * 1e6 * math.log(lb) / lb)

    s, ratio = q.bilinear_sum(10_000, 10, "mobius", 0)
    assert abs(ratio) < 1.0

    print("quadfib_py smoke test: ok")


if __name__ == "__main__":
    main()
