"""Smoke test for the gck extension module.

Builds the cdylib with cargo, loads it as `gck` and exercises the main
entry points. Run from anywhere: python3 python/smoke_test.py
"""

import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        import gck  # installed with maturin
        return gck
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "-q", "-p", "gck-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = os.path.join(ROOT, "target", "debug", "libgck.so")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(tmp, "gck.so"))
    sys.path.insert(0, tmp)
    import gck
    return gck


gck = load()

XY = ["x", "y"]
ID = [["1", "0"], ["0", "1"]]
ZERO = [["0", "0"], ["0", "0"]]

# Symplectic type: a = 0, σ = ω = dx∧dy, π = ∂x∧∂y.
s = gck.Gcs(XY, ZERO, {"x^y": "1"}, {"x^y": "1"})
assert s.check().certified and s.check_on_basis().certified
assert len(s.j_matrix()) == 4 and s.j_matrix()[3][0] == "1", s.j_matrix()

# Hitchin pair (ω, Id) round trip.
pair = gck.HitchinPair(XY, {"x^y": "1"}, ID)
assert pair.check().certified and isinstance(pair.twist(), dict)
h = pair.to_gcs()
assert h.a == ID and h.pi == {"x^y": "-1"} and h.sigma == {"x^y": "-2"}, (h.a, h.pi, h.sigma)
assert h.check().certified
assert h.to_hitchin() == pair
assert s.eigenspace(["1/2", "-1"]).certified
assert s.opposite().opposite() == s

# Closed B gauge and back.
b = {"x^y": "x + y^2"}
assert s.gauge(b).check().certified
assert s.gauge(b).gauge({"x^y": "-x - y^2"}) == s

# Complex structure: π = 0 makes gcs-to-hitchin fail.
j = gck.Gcs(XY, [["0", "-1"], ["1", "0"]], {}, {})
assert j.check().certified
try:
    j.to_hitchin()
    raise AssertionError("expected GckError")
except gck.GckError:
    pass

# σ bumped by a non-commuting term breaks (3.1).
bad = gck.Gcs(XY, ZERO, {"x^y": "1"}, {"x^y": "1 + x"})
report = bad.check()
assert not report and report.witness is not None
assert "(3.1)" in report.failed_labels(), report.failed_labels()

# Files, suites and conversions.
text = open(os.path.join(ROOT, "crates", "cli", "fixtures", "symplectic_r2.json")).read()
f = gck.StructureFile.parse(text)
assert str(f) == text
name = next(k for k, v in f.structures().items() if v == "hitchin")
assert f.check(name, "hitchin").certified
g = f.convert(name, "hitchin-to-gcs")
assert g.check(name, "gcs").certified
try:
    gck.StructureFile.parse("{")
    raise AssertionError("expected ValueError")
except ValueError:
    pass

assert gck.parse_poly("y*x + x*y", XY) == "2*x*y", gck.parse_poly("y*x + x*y", XY)
tallies = gck.fuzz(7, dim=2, degree=1, count=5)
assert tallies and all(failed == 0 for _, failed in tallies.values()), tallies

print("smoke test passed")
