"""Smoke test for the pytriarea extension.

Build first:  pip install --no-build-isolation -e crates/python
Run:          python3 python/smoke_test.py
"""

import random
from fractions import Fraction

import pytriarea as ta


def shoelace(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def main():
    a1 = ta.Triangulation.generate("accordion 1")
    assert a1.vertex_count == 7 and len(a1.inner_faces) == 9
    assert not a1.is_eulerian() and a1.is_four_connected()

    r = ta.analyze(a1)
    assert r["summary"] == "AREA-UNIVERSAL (degrees 3/3, crr, odd)", r
    assert ta.analyze(ta.Triangulation.generate("accordion 2"))["verdict"] == "NotAreaUniversalEulerian"
    ds = ta.analyze(ta.Triangulation.generate("double-stacking 2 3"))
    assert ds["verdict"] == "AreaUniversal", ds

    k4 = ta.Triangulation(4, [(0, 1, 3), (1, 2, 3), (2, 0, 3)], (0, 2, 1), ["a", "b", "c", "d"])
    assert ta.Triangulation.from_text(k4.to_text()).labels == ["a", "b", "c", "d"]
    pts, rep = ta.realize(k4, [1, 2, 3])
    assert rep["residual_faces"] == [] and rep["strictly_oriented"]
    exact = [(Fraction(x), Fraction(y)) for x, y in pts]
    for face, want in zip(k4.inner_faces, [1, 2, 3]):
        assert shoelace(*(exact[v] for v in face)) == want

    rng = random.Random(4)
    areas = [Fraction(rng.randint(1, 50), rng.randint(1, 50)) for _ in a1.inner_faces]
    pts, rep = ta.realize(a1, areas)
    assert rep["within_tol"] and rep["orientations_ok"] and rep["sum_identity"]
    assert len(rep["residual_faces"]) <= 2
    again = ta.verify(a1, areas, pts)
    assert again["residual_faces"] == rep["residual_faces"]
    assert ta.svg(a1, pts, areas).startswith("<svg")

    # (x - 1)(x + 2)(x^2 + 1)
    coeffs = [-2, 1, -1, 1, 1]
    assert len(ta.real_root_intervals(coeffs)) == 2
    assert ta.count_real_roots(coeffs, "0", "3/2") == 1

    try:
        ta.Triangulation(4, [(0, 1, 3)], (0, 2, 1))
    except ValueError:
        pass
    else:
        raise AssertionError("invalid triangulation accepted")

    print("pytriarea smoke test: ok")


if __name__ == "__main__":
    main()
