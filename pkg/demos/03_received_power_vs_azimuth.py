"""Reproduce the received-power-versus-azimuth comparison: a fixed
broadside array loses the cosine pattern factor as the user swings off
axis, while re-oriented (RAS) elements track the user and hold the power
flat. Writes the CSV artifact consumed by the plotting package.

Run:  python demos/03_received_power_vs_azimuth.py
"""

import math
from collections import defaultdict

from rasim import default_config, emit_results, run_azimuth_sweep

config = default_config()
rows = run_azimuth_sweep(config)
path = emit_results(rows, "csv", "azimuth_sweep.csv",
                    metadata={"config": config.resolved_dict()})
print(f"wrote {len(rows)} rows to {path}\n")

table = defaultdict(dict)
for r in rows:
    table[round(r.swept_value, 9)][r.scheme.value] = r.value_db

print("azimuth | Fixed (dBm) |  RAS (dBm) |  MA (dBm) | RAS-Fixed")
for phi in sorted(table):
    if abs(round(math.degrees(phi)) % 20) > 1e-9:
        continue  # print every 20 degrees
    row = table[phi]
    print(f"{math.degrees(phi):+7.0f} | {row['Fixed']:11.3f} | {row['RAS']:10.3f} "
          f"| {row['MA']:9.3f} | {row['RAS'] - row['Fixed']:+9.3f}")

edge = max(table)
print(f"\nat the sweep edge the gap approaches 10*log10(1/cos(pi/3)) = "
      f"{10 * math.log10(2):.4f} dB: with maximum-ratio weights both schemes "
      "recover the array factor, so only the element pattern loss separates them.")
