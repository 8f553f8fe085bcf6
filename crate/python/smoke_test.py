"""Smoke test for the tgeom Python module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/tgeom-*.whl
"""

import os
import tempfile

import tgeom


def main():
    half = [("A", "B", 1.0), ("A", "C", 4.0), ("B", "C", 1.0)]
    three = tgeom.SigmaSpace.from_table(["A", "B", "C"], half + [(q, p, x) for p, q, x in half])
    assert tgeom.SigmaSpace.parse("points: A B C\nsigma: A B 1\nsigma: A C 4\nsigma: B C 1\n").matrix() == three.matrix()
    assert len(three) == 3 and three.is_symmetric()
    assert tgeom.scalar_product(three, ("A", "B"), ("A", "C")) == 4.0
    assert tgeom.norm_squared(three, ("A", "C")) == 8.0
    checked, symmetry_checked, violations = tgeom.verify_identities(three)
    assert checked > 0 and symmetry_checked and not violations

    grid = tgeom.SigmaSpace.grid(2, 3)
    assert len(tgeom.equivalence_classes(grid)) == 25
    same, counter = tgeom.equivalent(grid, ("p0_0", "p1_0"), ("p1_1", "p2_1"))
    assert same and counter is None
    same, counter = tgeom.equivalent(grid, ("p0_0", "p1_0"), ("p0_0", "p0_1"))
    assert not same and counter[2] == "first-slot"

    full = tgeom.SigmaSpace.grid(2, 2)
    deleted = tgeom.SigmaSpace.grid(2, 2, deleted=[[1, 1]])
    v, w = ("p0_0", "p1_0"), ("p0_0", "p0_1")
    assert tgeom.solve_combination(full, 1.0, 1.0, v, w).solutions == [("p0_0", "p1_1")]
    empty = tgeom.solve_combination(deleted, 1.0, 1.0, v, w)
    assert not empty.is_defined() and empty.guaranteed is None

    chained = tgeom.solve_combination(three, 1.0, 1.0, ("A", "B"), ("B", "C"))
    assert chained.guaranteed == "chain-sum" and chained.representative == ("A", "C")
    assert tgeom.construct_guaranteed(three, -1.0, 0.0, ("A", "B"), ("B", "C")) == ("B", "A")
    assert tgeom.chain_sum(("A", "B"), ("B", "C")) == ("A", "C")
    assert tgeom.negate(("A", "B")) == ("B", "A")

    rows = tgeom.survey(deleted, [(1.0, 1.0)]).splitlines()
    assert rows[1] == "1,1,81,63,45,45,18", rows

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "grid.txt")
        deleted.save(path)
        back = tgeom.SigmaSpace.load(path)
        assert back.points == deleted.points and back.matrix() == deleted.matrix()

    try:
        tgeom.solve_combination(tgeom.SigmaSpace.grid(2, 7), 1.0, 1.0, v, w)
    except tgeom.LimitError:
        pass
    else:
        raise AssertionError("expected LimitError")
    try:
        tgeom.SigmaSpace.parse("points: A B\nsigma: A A 0.5\n")
    except tgeom.TgeomError as e:
        assert "diagonal" in str(e) or "σ" in str(e), e
    else:
        raise AssertionError("expected TgeomError")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
