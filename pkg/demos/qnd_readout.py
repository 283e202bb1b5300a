"""
Non-demolition readout of the polarisation
==========================================

Instead of absorbing the photon, entangle it with an ancilla photon and
detect the ancilla: the outcome lands H with probability |h|^2 and V with
probability |v|^2, while the measured photon survives in the reported
polarisation, ready to be asked again.
"""

import math

from sectorsim import PhotonPolarisation, qnd_outcome, qnd_premeasure, qnd_sample

pol = PhotonPolarisation(math.sqrt(0.7), math.sqrt(0.3))

# %%
# The entangled pre-measurement state h|HH> + v|VV>:

state = qnd_premeasure(pol)
print("pre-measurement amplitudes on (photon, ancilla):")
for flat, label in enumerate(("HH", "VH", "HV", "VV")):
    print(f"  |{label}> : {state.amps[flat].real:.6f}")

# %%
# Detecting the ancilla gives the exact outcome law, and the surviving
# photon collapses onto the corresponding basis state:

outcome = qnd_outcome(pol)
for label in ("H", "V"):
    post = outcome.post_states[label].amps
    print(f"outcome {label}: probability {outcome.probabilities[label]:.3f},"
          f" post state {post.real}")

# %%
# Seeded sampling converges to the law at the binomial rate:

print("\nshots    frequency of H   3-sigma window")
for shots in (100, 10000, 1000000):
    counts = qnd_sample(pol, shots=shots, seed=20260815)
    sigma = math.sqrt(0.7 * 0.3 / shots)
    print(f"{shots:<8d} {counts['H'] / shots:<16.6f} +/- {3 * sigma:.6f}")
