#!/usr/bin/env python3
"""Smoke test for the torocoh_py extension module.

Builds the extension if needed, loads it straight from the cargo target
directory, and exercises every exported operation on the two worked
instances (a half-integer twist that kills all cohomology, and a quadratic
irrational twist with one surviving exceptional mode).

Run from anywhere:  python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    so = ROOT / "target" / "release" / "libtorocoh_py.so"
    if not so.exists():
        subprocess.run(
            ["cargo", "build", "--release", "-p", "torocoh-py"],
            cwd=ROOT,
            check=True,
        )
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="torocoh_py_"))
    shutil.copy(so, tmp / "torocoh_py.so")
    sys.path.insert(0, str(tmp))
    import torocoh_py

    return torocoh_py


GROUP_HALF = json.dumps(
    {
        "n": 2,
        "m": 1,
        "S": [
            [{"re": 0, "im": {"kind": "quadratic", "a": 0, "b": 1, "D": 2}}],
            [{"re": 0, "im": 1}],
        ],
    }
)
BUNDLE_HALF = json.dumps({"d_e": [0, 0], "d_s": [{"kind": "rational", "num": "1", "den": "2"}]})

GROUP_SQRT2 = json.dumps(
    {
        "n": 2,
        "m": 1,
        "S": [
            [{"re": 0, "im": 1}],
            [{"re": {"kind": "quadratic", "a": 0, "b": 1, "D": 2}, "im": 0}],
        ],
    }
)
BUNDLE_SQRT2 = json.dumps({"d_e": [0, 0], "d_s": [{"kind": "quadratic", "a": 0, "b": 1, "D": 2}]})

GROUP_LAC = json.dumps(
    {
        "n": 2,
        "m": 1,
        "S": [
            [{"re": 0, "im": 1}],
            [{"re": {"kind": "lacunary", "rule": "supergap"}, "im": 0}],
        ],
    }
)
BUNDLE_LAC = json.dumps({"d_e": [0, 0], "d_s": [{"kind": "lacunary", "rule": "supergap"}]})

FORM = json.dumps(
    {
        "p": 1,
        "m": 1,
        "pi_pow": 0,
        "modes": [{"sigma": [1, 0, 0], "coeffs": {"1": {"re": 1.0, "im": 0.0}}}],
    }
)


def check(name, cond):
    status = "ok" if cond else "FAIL"
    print(f"  {name}: {status}")
    if not cond:
        raise SystemExit(f"smoke test failed at: {name}")


def main():
    t = load_module()

    print("validate / frame / bundle")
    v = json.loads(t.validate(GROUP_HALF))
    check("irrationality certified", v["irrationality"]["status"] == "certified_holds")
    f = json.loads(t.frame(GROUP_HALF))
    check("frame C is 2x2", len(f["C"]) == 2 and len(f["C"][0]) == 2)
    b = json.loads(t.bundle(GROUP_HALF, BUNDLE_HALF))
    check("d(L) = -1/2", b["d_L"][0]["re"]["exact"] == "-1/2")

    print("sigma0 / shift / scan")
    s0 = json.loads(t.sigma0(GROUP_HALF, BUNDLE_HALF))
    check("no exceptional mode for the half twist", s0["sigma0"] is None)
    s0b = json.loads(t.sigma0(GROUP_SQRT2, BUNDLE_SQRT2))
    check("exceptional mode (0,1,0) for the sqrt2 twist", s0b["sigma0"] == [0, 1, 0])
    sh = json.loads(t.shift(GROUP_HALF, BUNDLE_HALF, [1, 1, 2]))
    check("pivot at the only direction", sh["pivot"] == 1)
    sc = json.loads(t.scan(GROUP_HALF, BUNDLE_HALF, 6))
    check("scan covers 6 shells", len(sc["records"]) == 6)

    print("certify / refute / witness")
    c = json.loads(t.certify(GROUP_HALF, BUNDLE_HALF))
    check("half twist certified", c["status"] == "certified_holds")
    r = json.loads(t.refute(GROUP_LAC, BUNDLE_LAC, "supergap", 3))
    check("supergap refuted", r["status"] == "certified_fails")
    w = json.loads(t.witness(GROUP_LAC, BUNDLE_LAC, "supergap", 3))
    check("witness family passes", w["all_pass"] is True)

    print("solve")
    sol = json.loads(t.solve(GROUP_HALF, BUNDLE_HALF, FORM))
    check("no harmonic remainder", sol["harmonic"] is None)
    check("exact residual", sol["residual_sup"] == 0.0)
    check("one preimage mode", len(sol["psi"]["modes"]) == 1)

    print("classify")
    k1 = json.loads(t.classify(GROUP_HALF, BUNDLE_HALF))
    check("half twist is case I_i", k1["case"] == "I_i" and k1["grade"] == "certified")
    k2 = json.loads(t.classify(GROUP_SQRT2, BUNDLE_SQRT2))
    check("sqrt2 twist is case I_ii", k2["case"] == "I_ii" and k2["grade"] == "certified")
    k3 = json.loads(t.classify(GROUP_LAC, BUNDLE_LAC, witness_rule="supergap"))
    check("lacunary twist is case II", k3["case"] == "II" and k3["grade"] == "certified")

    print("error paths")
    try:
        t.validate("{not json")
        check("bad JSON raises", False)
    except ValueError:
        check("bad JSON raises", True)
    try:
        t.shift(GROUP_HALF, BUNDLE_HALF, [1, 2])
        check("wrong sigma length raises", False)
    except ValueError:
        check("wrong sigma length raises", True)

    print("smoke test passed")


if __name__ == "__main__":
    main()
