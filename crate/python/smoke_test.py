#!/usr/bin/env python3
"""Smoke test for the toruslab_py extension module.

Builds nothing itself: run `cargo build -p toruslab-py` (or --release) first,
then `python3 python/smoke_test.py`. The script locates the compiled cdylib in
target/, copies it next to a temp directory under the importable name
`toruslab_py.so`, imports it, and exercises the bound API end to end.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libtoruslab_py.so", "libtoruslab_py.dylib", "toruslab_py.dll")
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit(
        "toruslab_py cdylib not found; run `cargo build -p toruslab-py` first\n"
        "searched:\n  " + "\n  ".join(str(c) for c in candidates)
    )


def check(label: str, ok: bool, detail: str = "") -> None:
    print(f"  [{'pass' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
    if not ok:
        sys.exit(1)


def main() -> None:
    cdylib = locate_cdylib()
    workdir = Path(tempfile.mkdtemp(prefix="toruslab-smoke-"))
    shutil.copy2(cdylib, workdir / "toruslab_py.so")
    sys.path.insert(0, str(workdir))
    import toruslab_py as tl

    print(f"toruslab_py {tl.__version__} from {cdylib}")

    # curve construction and basic invariants: f = [1 : e^{z^2} : e^{z}]
    curve = tl.Curve([[(0, 0), (0, 0), (1, 0)], [(0, 0), (1, 0)]])
    check("curve shape", curve.n == 2 and curve.m == 1, repr(curve))

    # pointwise density at the origin: g_1'(0) = 0, g_2'(0) = 1, all u_i = 0,
    # so |df|^2(0) = (|g_2'|^2 + |g_1' - g_2'|^2) / (pi (1 + 1 + 1)^2) = 2/(9 pi)
    d0 = curve.fs_density(0.0, 0.0)
    check(
        "fs_density(0)",
        abs(d0 - 2.0 / (9.0 * math.pi)) <= 1e-12,
        f"{d0:.12e}",
    )
    check(
        "log_fs_density consistent",
        abs(curve.log_fs_density(0.0, 0.0) - math.log(d0)) <= 1e-9,
    )

    # growth exponent converges to m
    slope = curve.growth_exponent(1.0, 1e4, 13)
    check("growth exponent ~ m", abs(slope - 1.0) <= 0.05, f"slope {slope:.4f}")

    # characteristic for f = [1 : e^z]: T(r) ~ r / pi
    line = tl.Curve([[(0, 0), (1, 0)]])
    t100 = line.characteristic(100.0)
    check("T(100) ~ 100/pi", abs(t100 - 100.0 / math.pi) <= 0.5, f"{t100:.4f}")
    order = line.order_estimate(1e4)
    check("order ~ m + 1", abs(order - 1.0) <= 0.05, f"order {order:.4f}")

    # theorem 1.1 round trip
    passed, m, m_hat, degrees = curve.theorem1(1e4)
    check("theorem1 round trip", passed and m == m_hat == 1 and degrees == [2, 1])

    # level-set measure of z^2 at large radius: ~ 4/r below the 8/r bound
    measure = tl.level_set_measure([(0, 0), (0, 0), (1, 0)], 1e4, 1.0)
    check(
        "level-set measure ~ 4/r",
        abs(measure * 1e4 - 4.0) <= 0.05 and measure <= 8.0 / 1e4,
        f"measure * r = {measure * 1e4:.4f}",
    )

    # Schwarz recovery round trip for g = z^3 + 2
    coeffs, degree = tl.recover_coefficients([(2, 0), (0, 0), (0, 0), (1, 0)])
    worst = max(
        abs(complex(*got) - complex(*want))
        for got, want in zip(coeffs, [(2, 0), (0, 0), (0, 0), (1, 0)])
    )
    check("coefficient recovery", degree == 3 and worst <= 1e-9, f"worst {worst:.2e}")

    # invalid input surfaces as ValueError, not a crash
    try:
        tl.Curve([])
    except ValueError:
        check("input validation raises ValueError", True)
    else:
        check("input validation raises ValueError", False)

    # a fast slice of the verification suite
    results = tl.run_verification(quick=True, only=[5, 6, 9, 10])
    for cid, name, passed, detail in results:
        check(f"verify check {cid}", passed, name)

    print("smoke test passed")


if __name__ == "__main__":
    main()
