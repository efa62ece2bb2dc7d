"""What happens when the panel is not where we thought it was?

The beamformer and phase shifts are computed once for an assumed panel
position (the transmitter's projection onto the plane) and then applied
while the panel actually sits somewhere else.  The panel keeps facing the
specular direction for wherever it really is; only the electronics are
stale.  The metric is the normalized power deviation
|P_estimated - P_ideal| / max(P_estimated, P_ideal).
"""

import numpy as np

from rislink import load_config
from rislink.experiments import robustness

cfg = load_config()
result = robustness(cfg)

xi = result.header.index("x_m")
yi = result.header.index("y_m")
di = result.header.index("deviation")

xs = sorted({row[xi] for row in result.rows})
ys = sorted({row[yi] for row in result.rows})
dev = {(row[xi], row[yi]): row[di] for row in result.rows}

print("normalized power deviation map ('.' < 0.01, 'o' < 0.1, 'X' >= 0.1),")
print(f"{2 * cfg.sweeps.robustness_extent:.0f} m on each side, assumed "
      "position at the center:\n")
step = max(len(xs) // 21, 1)
for y in ys[::step]:
    line = "".join(
        "." if dev[(x, y)] < 0.01 else ("o" if dev[(x, y)] < 0.1 else "X")
        for x in xs[::step])
    print("   " + line)

inside = [row[di] for row in result.rows
          if abs(row[xi]) <= 2.5 and abs(row[yi]) <= 2.5]
print(f"\nworst deviation on the central 5 m x 5 m square: "
      f"{max(inside):.4f}")
print("Stale phase shifts survive because the optimal phase profile at the")
print("specular orientation is uniform across the panel; position error")
print("only detunes the transmit beamformer, and a 16-antenna array is")
print("forgiving over several meters at these distances.")
