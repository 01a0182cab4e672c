"""Smoke test for the g2geom_py extension module.

Uses an installed module if there is one; otherwise builds the crate with cargo
and loads the shared library from target/release.
"""

import importlib
import importlib.util
import json
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("g2geom_py")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "g2geom-py"], cwd=ROOT, check=True
    )
    release = ROOT / "target" / "release"
    lib = next(p for p in release.glob("libg2geom_py.*") if p.suffix in (".so", ".dylib"))
    dest = Path(tempfile.mkdtemp()) / "g2geom_py.so"
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("g2geom_py", dest)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def poly(*terms):
    return {"poly": {"terms": [{"pow": list(p), "coeff": c} for p, c in terms]}}


def main():
    g = load()

    # |u x v|^2 = |u|^2 |v|^2 - <u, v>^2
    u = ["1", "-2", "1/2", "0", "3", "1", "-1"]
    v = ["0", "1", "1", "-3/4", "2", "0", "5"]
    w = [Fraction(x) for x in g.cross(u, v)]
    fu, fv = [Fraction(x) for x in u], [Fraction(x) for x in v]
    dot = lambda a, b: sum(x * y for x, y in zip(a, b))
    assert dot(w, w) == dot(fu, fu) * dot(fv, fv) - dot(fu, fv) ** 2

    # the x-plane is associative
    e = lambda i: [str(int(i == j)) for j in range(7)]
    verdict = json.loads(g.calibrate([e(0), e(1), e(2)]))
    assert verdict["kind"] == "associative", verdict

    # Omega spans the one-dimensional summand of 3-forms
    parts = dict(g.decompose("g2", g.omega()))
    assert json.loads(parts["1"]) == json.loads(g.omega())
    assert json.loads(parts["27"])["terms"] == []

    # semi-flat transform is an involution and keeps the residuals at zero
    zero = poly()
    cycle = {
        "kind": "coassoc-semiflat",
        "graph": [poly(([1], "1")), poly(([0, 1], "1"))],
        "base_connection": [zero, zero],
        "fiber_connection": [zero, zero],
    }
    out = g.fourier_transform("coassociative-t4", json.dumps(cycle))
    assert json.loads(out)["layout"] == "dual"
    assert all(x == 0.0 for x in g.residuals(out).values())
    back = json.loads(g.fourier_transform("coassociative-t4", out))
    assert back["fiber_connection"] == [zero, zero]

    # bad input raises ValueError
    try:
        g.fourier_transform("coassociative-t4", "{}")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    report = json.loads(g.verify(json.dumps({"suites": ["g2-identities"], "samples": 3})))
    assert report["passed"], report["summary"]

    print("smoke test passed")


if __name__ == "__main__":
    sys.exit(main())
