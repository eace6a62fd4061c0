#!/usr/bin/env python3
"""Smoke test for the permposet_py extension module.

Builds the cdylib if needed, loads it, and exercises one call per exposed
surface against known values.

Usage: python3 python/smoke_test.py
"""

import json
import os
import shutil
import subprocess
import sys
import tempfile

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build_extension():
    target = os.environ.get("CARGO_TARGET_DIR", os.path.join(REPO, "target"))
    lib = os.path.join(target, "release", "libpermposet_py.so")
    if not os.path.exists(lib):
        subprocess.run(
            ["cargo", "build", "--release", "-p", "permposet-py"],
            cwd=REPO,
            check=True,
        )
    if not os.path.exists(lib):
        raise SystemExit(f"extension library not found at {lib}")
    staging = tempfile.mkdtemp(prefix="permposet_py_")
    shutil.copy(lib, os.path.join(staging, "permposet_py.so"))
    sys.path.insert(0, staging)


def main():
    build_extension()
    import permposet_py as pp

    checks = 0

    def check(name, got, want):
        nonlocal checks
        if got != want:
            raise SystemExit(f"FAIL {name}: got {got!r}, want {want!r}")
        checks += 1
        print(f"ok {name}: {got!r}")

    check("flatten", pp.flatten([4, 1, 6, 3, 5]), "31524")
    check("contains", pp.contains("1342", "1342675"), True)
    check("avoids", pp.contains("321", "123"), False)
    check("occurrences", pp.occurrences("231", "416325"), [[1, 3, 4], [1, 3, 5]])
    check(
        "embeddings",
        pp.embeddings("213", "21453"),
        ["21300", "21030", "21003"],
    )
    check("direct_sum", pp.direct_sum("213", "3142"), "2136475")
    check("skew_sum", pp.skew_sum("213", "3142"), "6573142")

    check("mobius brute", pp.mobius_value("12", "2413"), 3)
    check("mobius negative", pp.mobius_value("1", "2413"), -3)
    check(
        "mobius decomposable",
        pp.mobius_value("12", "24136857", method="decomposable"),
        12,
    )

    interval = json.loads(pp.interval_json("12", "24136857"))
    check("interval elements", len(interval["elements"]), 62)
    check("interval covers", len(interval["covers"]), 223)

    check("rank sizes", pp.rank_sizes("1342", "1342675"), [1, 3, 5, 1])
    check("unimodal", pp.is_rank_unimodal("1342", "1342675"), True)
    check("max antichain", pp.max_antichain("1342", "1342675"), 5)
    check("sperner", pp.is_sperner("1342", "1342675"), True)
    check(
        "open components",
        sorted(pp.open_component_sizes("1342", "1342675")),
        [3, 5],
    )
    check("disconnected", pp.is_disconnected("1342", "1342675"), True)
    check("connected", pp.is_disconnected("123", "1342675"), False)
    check(
        "disconnected subinterval",
        pp.disconnected_subinterval("123", "1342675"),
        ("1342", "1342675"),
    )

    check("betti", pp.betti_numbers("1342", "1342675"), [0, 1, 1])
    check("euler", pp.euler_reduced("1342", "1342675"), 0)
    check("euler [123,351624]", pp.euler_reduced("123", "351624"), -1)
    check("not CM", pp.is_cohen_macaulay("123", "3416725"), False)
    check("chain CM", pp.is_cohen_macaulay("21", "51234"), True)
    check("not wedge", pp.wedge_of_spheres("1342", "1342675"), False)

    check("word order", pp.word_leq("112", "3212"), True)
    check("word order strict", pp.word_leq("22", "221"), True)
    check("certify", pp.certify_dual_cl("141", "23141"), ("certified", None))
    check(
        "refute",
        pp.certify_dual_cl("121", "23141"),
        ("refuted", ("131", "1331")),
    )
    check("layered to word", pp.layered_to_word("32154687"), "3212")
    check("word to layered", pp.word_to_layered("112"), "1243")

    mc = json.loads(pp.monte_carlo_prevalence("21", 20, trials=500, seed=7))
    if not mc["frequency"] >= mc["analytic_lower_bound"] - 3 * mc["std_error"]:
        raise SystemExit(f"FAIL monte carlo: {mc}")
    checks += 1
    print(f"ok monte carlo: frequency {mc['frequency']:.3f}")

    iv = pp.PatternInterval("1342", "1342675")
    check("class len", len(iv), 10)
    check("class mobius", iv.mobius(), 0)
    twin = pp.PatternInterval("213", "254613")
    check("class isomorphism", twin.is_isomorphic_to(iv), True)

    print(f"\nall {checks} smoke checks passed")


if __name__ == "__main__":
    main()
