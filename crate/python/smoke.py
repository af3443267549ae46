"""Smoke test for the pylegendrian extension module.

Build first with
    cargo build -p pylegendrian --features extension-module --release
"""

import cmath
import importlib
import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        return importlib.import_module("pylegendrian")
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libpylegendrian.so"
        if lib.exists():
            tmp = Path(tempfile.mkdtemp())
            shutil.copy(lib, tmp / "pylegendrian.so")
            sys.path.insert(0, str(tmp))
            return importlib.import_module("pylegendrian")
    sys.exit("pylegendrian not built; see the module docstring")


def main():
    pl = load()

    circle = pl.Knot.finite_r_circle((1.0, 0.5, 0.3), (0.6, 0.8), samples=512)
    assert circle.closed and len(circle) == 512
    assert abs(circle.energy()) <= 1e-3

    gerono = pl.Knot.gerono(512)
    energies = {m: gerono.energy(m) for m in ("subtraction", "cosine", "hadamard", "beta")}
    ref = energies["subtraction"]
    assert ref > 0.1
    assert all(abs(v - ref) <= 1e-2 * ref for v in energies.values()), energies

    b0 = gerono.beta(0j)
    assert abs(b0 - gerono.length ** 2) <= 1e-9 * gerono.length ** 2

    inv = gerono.invariance(seed=3, trials=4)
    assert inv["summary"]["max_relative_deviation"] <= 1e-2

    moments = gerono.moments()
    assert abs(moments["m4full"] - moments["m4"]) <= 1e-8 * moments["m4"]

    d = pl.koranyi_dist((0.0, 0.0, 0.0), (1.0, 0.0, 0.0))
    assert d == 1.0
    w = pl.omega((0.0, 0.0, 0.0), 1 + 0j, (1.0, 0.0, 0.0), 1j)
    assert cmath.isclose(w, -2j)

    spec = json.dumps({"type": "gerono", "scale": 2.0})
    assert math.isclose(pl.Knot.from_spec(spec, 512).energy(), ref, rel_tol=1e-6)

    try:
        pl.Knot.from_spec('{"type": "gerono", "bogus": 1}')
    except ValueError:
        pass
    else:
        raise AssertionError("unknown keys must be rejected")

    print("pylegendrian smoke test passed:", {k: round(v, 6) for k, v in energies.items()})


if __name__ == "__main__":
    main()
