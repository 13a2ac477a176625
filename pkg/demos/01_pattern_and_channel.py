"""Walk through the element pattern, free-space propagation, and how the
two compose into a channel vector.

Run:  python demos/01_pattern_and_channel.py
"""

import math

import numpy as np

from rasim import (
    CarrierSpec,
    RadiationPattern,
    build_upa,
    comm_channel,
    effective_gain,
    free_space_amplitude,
    mrt_weights,
    pattern_sphere_integral,
    received_power,
    watts_to_dbm,
)

carrier = CarrierSpec(frequency=2.4e9, wavelength=0.125, noise_power=1e-11)
pattern = RadiationPattern()  # peak gain 4 = 6.02 dBi

print("== Directional element pattern ==")
for eps_deg in (0, 30, 60, 89, 90, 120):
    gain = effective_gain(pattern, math.radians(eps_deg))
    print(f"  gain at {eps_deg:3d} deg off boresight: {gain:.3f}  "
          f"({10 * math.log10(gain) if gain else float('-inf'):+.2f} dBi)")

total = pattern_sphere_integral(pattern)
print(f"  sphere integral: {total:.6f} (isotropic radiator: {4 * math.pi:.6f})")
print("  -> peak gain 4 makes the cosine pattern power-neutral.\n")

print("== Free-space propagation at 2.4 GHz (wavelength 0.125 m) ==")
for d in (30.0, 100.0, 150.0):
    amp = free_space_amplitude(d, carrier.wavelength)
    print(f"  {d:5.0f} m: amplitude {amp:.3e}, path gain {20 * math.log10(amp):7.2f} dB")
print()

print("== Channel to a user 100 m away, 4x4 array at half-wavelength spacing ==")
layout = build_upa(4, 4, carrier.wavelength / 2, wavelength=carrier.wavelength)
user = np.array([100.0, 0.0, 0.0])
h = comm_channel(layout, pattern, user, carrier)
w = mrt_weights(h)
p_rx = received_power(h, w, 1.0)
print(f"  |h_n| range: {np.abs(h).min():.3e} .. {np.abs(h).max():.3e}")
print(f"  MRT received power at 1 W: {p_rx:.3e} W = {watts_to_dbm(p_rx):.2f} dBm")
print(f"  (single element on boresight would give "
      f"{watts_to_dbm(4 * (0.125 / (400 * math.pi)) ** 2):.2f} dBm; "
      "16 elements add 12 dB of beamforming gain)")
