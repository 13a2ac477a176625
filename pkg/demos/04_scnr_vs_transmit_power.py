"""Reproduce the SCNR-versus-transmit-power comparison for the sensing
link: re-orientable (RAS) elements beat the movable-antenna (MA) and fixed
baselines, and the gap widens as clutter replaces noise as the limiting
term. Uses the full default configuration (100 Monte-Carlo runs per power
level); expect roughly half a minute. Writes the CSV artifact consumed by
the plotting package.

Run:  python demos/04_scnr_vs_transmit_power.py
"""

import time
from collections import defaultdict

from rasim import default_config, emit_results, run_power_sweep

config = default_config()
print(f"sweeping transmit power with {config.power_sweep.monte_carlo_runs} runs "
      f"per level, seed {config.seed} ...")
started = time.monotonic()
rows = run_power_sweep(config)
print(f"done in {time.monotonic() - started:.0f}s")
path = emit_results(rows, "csv", "power_sweep.csv",
                    metadata={"config": config.resolved_dict()})
print(f"wrote {len(rows)} rows to {path}\n")

means = defaultdict(dict)
for r in rows:
    if r.run_index == -1:
        means[r.swept_value][r.scheme.value] = r.value_db

print("p_tx (dBm) | Fixed (dB) |   MA (dB) |  RAS (dB) | RAS-Fixed")
for p in sorted(means):
    row = means[p]
    print(f"{p:10.0f} | {row['Fixed']:10.3f} | {row['MA']:9.3f} "
          f"| {row['RAS']:9.3f} | {row['RAS'] - row['Fixed']:+9.3f}")

print("\nAt low power the echo is noise-limited and the schemes differ only by")
print("their gain toward the target; at high power the static clutter dominates")
print("and the re-oriented patterns also shade the clutter directions, so the")
print("gap over the fixed array widens.")
