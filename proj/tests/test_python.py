#!/usr/bin/env python3
"""Smoke tests for the python bindings (PYTHONPATH must point at the built module)."""
import math
import sys

import _fracscat as fs

failures = []


def check(cond, label):
    if not cond:
        failures.append(label)


check(set(fs.geometries()) == {"fudgeflake", "gosper", "koch"}, "geometry list")

info = fs.geometry_info("fudgeflake")
check(abs(info["measure"] - math.sqrt(3) / 2) < 1e-12, "fudgeflake measure")
check(abs(info["barycentre"][0]) < 1e-12 and abs(info["barycentre"][1]) < 1e-12,
      "barycentre at origin")

check(fs.mesh_sizes("fudgeflake", 3) == [1, 3, 9, 27], "fudgeflake mesh sizes")
check(fs.prefractal_count(3) == 1128, "prefractal count")

# m = 0: coefficients equal the load vector, nothing scatters
p0 = fs.Problem("gosper", level=2, k=2.0, m=0.0)
check(max(abs(c - g) for c, g in zip(p0.coefficients, p0.load)) == 0.0, "m=0 identity")
check(all(abs(v) == 0.0 for v in p0.far_field([0.0, 1.0, 2.0])), "m=0 far field")

# small solve: finite residual, plausible condition number, consistent fields
p = fs.Problem("fudgeflake", level=3, k=5.0, m=1.0)
check(p.size == 27, "level-3 size")
check(p.residual < 1e-8, "dense residual")
check(1.0 < p.condition() < 100.0, "condition estimate plausible")

pts = [(2.0, 0.0), (0.0, 2.0), (-2.0, 0.5)]
us = p.scattered_field(pts)
ut = p.total_field(pts)
for (x, y), s, t in zip(pts, us, ut):
    ui = complex(math.cos(5.0 * y), math.sin(5.0 * y))  # e^{ik d.x}, d = (0,1)
    check(abs(t - s - ui) < 1e-12, "total = incident + scattered")

# gmres path agrees with the dense solve
pg = fs.Problem("fudgeflake", level=3, k=5.0, m=1.0, solver="gmres")
check(max(abs(a - b) for a, b in zip(p.coefficients, pg.coefficients)) < 1e-8,
      "gmres matches dense")

# invalid inputs raise
for bad in (lambda: fs.Problem("nope", level=2, k=2.0, m=1.0),
            lambda: fs.Problem("gosper", level=2, k=2.0, m=-1.0j),
            lambda: fs.Problem("gosper", level=2, k=2.0, m=1.0, solver="nope")):
    try:
        bad()
        failures.append("expected ValueError")
    except ValueError:
        pass

if failures:
    print("FAILED:")
    for f in failures:
        print(" -", f)
    sys.exit(1)
print("python binding checks passed")
