"""
Shrinking a long signal with stratified sampling
================================================

A 4097-point channel is cut into four contiguous strata, a statistically
justified sample size is computed from a confidence level, and the sample
is allocated across strata in proportion to size times dispersion.
"""

import numpy as np

from eegstrata import (CONFIDENCE_Z, Channel, SamplingConfig, allocate,
                       reduce_channel, required_sample_size, stratify)

# the preset confidence levels and their standard-normal variates
print("confidence presets:", CONFIDENCE_Z)

# how many samples a 4097-point population needs at each level
for level, z in sorted(CONFIDENCE_Z.items()):
    cfg = SamplingConfig(z=z, population_size=4097)
    print(f"  {level}% (z={z}): n_bar = {required_sample_size(cfg)}")

# four contiguous strata; the remainder goes to the last stratum
plan = stratify(4097, 4)
print("stratum sizes:", plan.sizes)

# a toy channel: quiet first half, noisy second half
rng = np.random.default_rng(0)
samples = np.concatenate([
    0.3 * rng.standard_normal(2048),
    2.0 * rng.standard_normal(2049),
])
channel = Channel(id="A/demo", set_label="A", samples=samples)

# optimum allocation hands the noisy strata a larger share of the budget
n_bar = required_sample_size(SamplingConfig(z=1.96, population_size=4097))
alloc = allocate([channel], plan, n_bar)
print(f"allocating n_bar={n_bar}:")
for i, (n_i, w) in enumerate(zip(alloc.per_stratum, alloc.per_stratum_weight), start=1):
    print(f"  stratum {i}: {n_i:4d} samples (weight {w:8.1f})")
print("total drawn:", alloc.total)

# the reduced channel is an order-preserving subsequence of the original
reduced = reduce_channel(channel, plan, alloc, seed=42)
print("reduced length:", len(reduced), "of", len(channel))

# a systematic (evenly spaced) draw is available as well and ignores the seed
systematic = reduce_channel(channel, plan, alloc, seed=0, policy="systematic")
print("systematic draw, first 5 values:", np.round(systematic.samples[:5], 3))
