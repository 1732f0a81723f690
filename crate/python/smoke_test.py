#!/usr/bin/env python3
"""Smoke test for the newton_moduli_py extension module.

Builds nothing itself: expects `cargo build -p newton-moduli-py` (or
--release) to have produced the cdylib, which it copies next to a temp
directory under the importable name and then exercises end to end.
"""

import json
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib() -> pathlib.Path:
    names = ["libnewton_moduli_py.so", "libnewton_moduli_py.dylib", "newton_moduli_py.dll"]
    for profile in ("release", "debug"):
        for name in names:
            cand = ROOT / "target" / profile / name
            if cand.exists():
                return cand
    raise SystemExit(
        "extension not built: run `cargo build -p newton-moduli-py` first"
    )


def import_module():
    lib = locate_cdylib()
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="newton_moduli_py_"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, tmp / f"newton_moduli_py{suffix}")
    sys.path.insert(0, str(tmp))
    import newton_moduli_py

    return newton_moduli_py


def main() -> None:
    nm = import_module()

    # the cubic boundary divisor {0:2, inf:1} is the normal-form class
    phi3 = nm.NewtonMap(["0", "0", "inf"])
    assert phi3.degree() == 3
    assert phi3.classify() == "strictly_semistable"
    assert phi3.holes() == [("0", 1), ("inf", 1)]
    assert phi3.pair() == ("X^2*Y", "2*X*Y^2")
    assert json.loads(phi3.git_class()) == {"kind": "strictly_semistable", "degree": 3}
    assert phi3.multiplier_at("0") == "1/2"
    assert phi3.iterate_verdicts(2) == ["strictly_semistable", "strictly_semistable"]

    # its truncated measure accumulates mass at the holes, tail is exact
    atoms, tail = phi3.measure(4)
    assert tail == "1/243"
    masses = {pos: m for pos, m in atoms}
    assert masses[None] == masses[(0.0, 0.0)]

    # a stable quartic: measure, barycenter and the theta assignment
    quartic = nm.NewtonMap(["0", "0", "1", "2"])
    assert quartic.classify() == "stable"
    bx, by, bz = quartic.barycenter(7)
    assert (bx * bx + by * by + bz * bz) ** 0.5 < 1.0
    kind, residual = quartic.theta(7)
    assert kind == "barycentered" and residual < 1e-8

    # the normal form for d=5
    assert nm.phi_normal_form(5) == ("4*X^3*Y^2", "6*X^2*Y^3")

    # conjugacy: found exactly, or refuted
    assert nm.conjugacy(["0", "1", "1", "4"], ["1", "3", "3", "9"]) == ("2", "1")
    assert nm.conjugacy(["0", "0", "0", "1", "1", "2"], ["0", "0", "0", "1", "1", "3"]) is None

    # Berkovich side: the cubic family {0, 1, t}
    fam = nm.Family(["0", "1", "t"])
    assert sorted(fam.vertices()) == ["xi(0, 0)", "xi(0, 1)"]
    locus = json.loads(fam.hss())
    assert locus["kind"] == "semistable_region"
    assert len(locus["vertices"]) == 2 and len(locus["segments"]) == 1
    assert json.loads(fam.kappa()) == {"kind": "strictly_semistable", "degree": 3}
    assert fam.stable_curve_shape() == (2, 4, 1)
    assert "graph tree_of_spheres" in fam.tree_dot()

    # quartic family: unique stable vertex at xi(0, -1)
    fam4 = nm.Family(["0", "1", "t^(-1)", "2*t^(-1)"])
    assert json.loads(fam4.hss()) == {"kind": "unique_stable_vertex", "vertex": "xi(0, -1)"}
    assert fam4.reduction("0", -1, 1) == [("0", 2), ("1", 1), ("2", 1)]

    # tree equivalence across a same-shape pair
    t1 = nm.Family(["0", "3*t^2", "3*t^2 + t^3"])
    t2 = nm.Family(["0", "3", "3 + t"])
    assert t1.equivalent_to(t2)

    print("smoke test OK")


if __name__ == "__main__":
    main()
