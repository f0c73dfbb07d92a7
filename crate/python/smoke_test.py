"""Smoke test for the operad_forge extension module.

Build and install first:

    pip install maturin
    pip install -e crates/python --no-build-isolation

Then run `python python/smoke_test.py` from the repository root.
"""

import operad_forge as of


def main() -> None:
    v3 = [str(s) for s in of.generate_v(3)]
    assert v3 == [
        "(121)|(121)|(121)",
        "(121)|(1212)|(21)",
        "(1212)|(212)|(21)",
        "(12121)|(12)",
    ], v3

    a = of.Signature("(121)|(121)", 2)
    b = of.Signature("(1212)|(21)", 2)
    assert str(a.meet(b)) == "(121)|(21)"
    assert a.swap().swap() == a
    assert all(x.le(a) for x in a.down_set())

    assert of.check_conjecture1(3)["result"] == "pass"
    weak = of.check_conjecture1(2, [(0, [a])])
    assert weak["result"] == "fail" and weak["witness"]["required"] == "(212)|(21)"
    assert of.check_conjecture2(4)["result"] == "fail"
    assert of.downset_betti(3)[0] == 1
    assert of.milgram_betti(3) == [1, 0, 1]

    paths = of.enumerate_paths([1, 0], 1)
    assert len(paths) == of.count_paths([1, 0], 1) == 12
    p = of.LatticePath.from_json('{"word":[1,2,1],"cuts":[2],"degrees":{"in":[1,0],"out":1}}')
    assert str(p) == "12|1" and p.in_block("(121)") and p in paths
    assert p.pair_factors() == [((1, 2), "(121)")]

    assert of.block_homology("(1212)", out=1)["is_point"]
    assert of.matching_check("(12)", 2)["result"] == "pass"
    assert of.matching_check("(12)", 1)["result"] == "fail"

    try:
        of.Signature("(13)", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("malformed label accepted")

    print("operad_forge smoke test: ok")


if __name__ == "__main__":
    main()
