"""Projections onto the supported convex set families.

Every set in memproj exposes an exact nearest-point map.  This script walks
through each family, projects a test point, and verifies the two facts all
metric projections share: projecting twice changes nothing, and the
distance to any member never increases.

Run:  python demos/01_projections.py
"""
import numpy as np

from memproj import (
    AffineSubspace,
    Ball,
    Box,
    Halfspace,
    Hyperplane,
    LineThroughOrigin,
    distance,
    project,
)

x = np.array([2.0, -1.0, 0.5])
print(f"test point x = {x}\n")

examples = [
    ("hyperplane  {y : a.y = 1}", Hyperplane([1.0, 1.0, 0.0], 1.0)),
    ("halfspace   {y : a.y <= 0}", Halfspace([0.0, 0.0, 1.0], 0.0)),
    ("ball        B((0,0,0), 1)", Ball([0.0, 0.0, 0.0], 1.0)),
    ("box         [-1,1]^3", Box([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0])),
    ("line        span{(1,1,1)}", LineThroughOrigin([1.0, 1.0, 1.0])),
    ("affine      (0,0,1) + span{e1,e2}", AffineSubspace([0.0, 0.0, 1.0],
                                                         [[1.0, 0.0, 0.0],
                                                          [0.0, 1.0, 0.0]])),
]

for label, s in examples:
    p = project(x, s)
    again = project(p, s)
    print(f"{label}")
    print(f"    projection  {np.round(p, 6)}")
    print(f"    distance    {distance(x, s):.6f}")
    print(f"    reprojection moved by {np.linalg.norm(again - p):.2e} (idempotent)")

# the error-reduction property that underpins every convergence argument:
# stepping to the projection cannot move you further from any member z
s = Ball([0.0, 0.0, 0.0], 1.0)
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(1000):
    y = rng.uniform(-3, 3, size=3)
    p = project(y, s)
    z = rng.uniform(-0.5, 0.5, size=3)  # a member of the ball
    gain = np.linalg.norm(p - z) ** 2 - (
        np.linalg.norm(y - z) ** 2 - np.linalg.norm(p - y) ** 2
    )
    worst = max(worst, gain)
print(f"\nerror-reduction slack over 1000 random ball projections: {worst:.2e}")
print("(nonpositive up to float rounding: projections always shrink the "
      "squared distance to members by at least the squared step)")
