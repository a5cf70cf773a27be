#!/usr/bin/env python3
"""End-to-end smoke test for the acf_py extension module.

Builds the extension with cargo if needed, imports it, and drives one
analyze -> gen-target -> synth -> simulate round trip plus a few charge
helpers. Exits non-zero on the first failed check.
"""

import json
import math
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
BUILD_DIR = ROOT / "python" / "build"


def ensure_extension():
    BUILD_DIR.mkdir(parents=True, exist_ok=True)
    module = BUILD_DIR / "acf_py.so"
    lib = ROOT / "target" / "release" / "libacf_py.so"
    if not lib.exists() or not module.exists():
        subprocess.run(
            ["cargo", "build", "--release", "-p", "acf-py"], cwd=ROOT, check=True
        )
        shutil.copy2(lib, module)
    elif lib.stat().st_mtime > module.stat().st_mtime:
        shutil.copy2(lib, module)
    sys.path.insert(0, str(BUILD_DIR))


def check(name, condition):
    status = "ok" if condition else "FAIL"
    print(f"  {name}: {status}")
    if not condition:
        sys.exit(1)


def main():
    ensure_extension()
    import acf_py

    print("charge helpers")
    check("Z_3 charge addition", acf_py.charge_add([2], [2], [3]) == [1])
    check("mixed group addition", acf_py.charge_add([1, 1], [1, 1], [2, 0]) == [0, 2])
    check(
        "U(1) total charge is the Hamming weight",
        acf_py.total_charge([0, 1, 1, 0], [[0], [1]], [0]) == [2],
    )

    print("analysis")
    u1 = acf_py.Problem(moduli=[0], letter_charges=[[0], [1]], n=4, k=2)
    report = json.loads(u1.analyze())
    check("U(1) qubits n=4 k=2 semi-universal", report["semi_universal"] is True)
    check("commutant dim n+1", report["commutant_dim"] == 5)
    check("predicted dim 68", report["predicted_dim"] == 68)

    z3 = acf_py.Problem(moduli=[3], letter_charges=[[0], [1]], n=4, k=2)
    check("Z_3 k=2 not semi-universal", z3.is_semi_universal() is False)
    check("Z_3 k=2 commutant dim 5", z3.commutant_dim() == 5)
    z3k3 = acf_py.Problem(moduli=[3], letter_charges=[[0], [1]], n=4, k=3)
    check("Z_3 k=3 semi-universal", z3k3.is_semi_universal() is True)

    print("redistribution generators")
    z2 = acf_py.Problem(moduli=[2], letter_charges=[[0], [1]], n=3, k=2)
    check(
        "hop alone is not transitive for Z_2",
        z2.check_hredist_transitive([([0, 1], [1, 0])]) is False,
    )
    check(
        "hop plus pair creation is transitive",
        z2.check_hredist_transitive([([0, 1], [1, 0]), ([0, 0], [1, 1])]) is True,
    )

    print("paths")
    path = u1.find_path([0, 0, 1, 1], [1, 1, 0, 0])
    check("path endpoints", path[0] == [0, 0, 1, 1] and path[-1] == [1, 1, 0, 0])
    check("swap path length 3", len(path) == 3)

    print("compile and re-simulate")
    u1n3 = acf_py.Problem(moduli=[0], letter_charges=[[0], [1]], n=3, k=2)
    target = u1n3.gen_target(seed=11)
    circuit, synth_rep = u1n3.synth(target, strict=True)
    sim = json.loads(u1n3.simulate(circuit, target))
    check("all emitted gates symmetric", sim["invariant_ok"] is True)
    check("block distance below 1e-7", sim["block_distance"] < 1e-7)
    check(
        "recovered phases are trivial",
        all(abs(p["phase"]) < 1e-9 for p in sim["phases"]),
    )
    check("synth report parses", json.loads(synth_rep)["strict"] is True)

    print("oracle")
    verify = json.loads(u1n3.verify())
    check("closure dim 19", verify["closure_dim"] == 19)
    check("oracle consistent", verify["ok"] is True)

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
