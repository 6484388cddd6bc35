"""The boundary window and penalty knobs, checked against brute force.

The windowed gain rewards a predicted boundary by the posterior mass of
matching boundaries within W gaps, so nearby placements count as
correct. This script sweeps W and gamma on a sequence sampled from a
sticky two-color model, then verifies the decoder against exhaustive
enumeration on the same instance.
"""

from gainhmm import (
    GainParams,
    brute_force_best_annotation,
    brute_force_expected_gain,
    build_hmm,
    gain_decode,
    sample_path,
)

model = build_hmm({
    "alphabet": ["x", "y"],
    "colors": [{"id": 0, "name": "A"}, {"id": 1, "name": "B"}],
    "states": [
        {"id": "s_A", "color": 0, "emission": {"x": 0.8, "y": 0.2}},
        {"id": "s_B", "color": 1, "emission": {"x": 0.3, "y": 0.7}},
    ],
    "initial": {"s_A": 0.5, "s_B": 0.5},
    "transitions": {
        "s_A": {"s_A": 0.92, "s_B": 0.08},
        "s_B": {"s_A": 0.08, "s_B": 0.92},
    },
})

states, seq = sample_path(model, 8, seed=20)
truth = model.state_colors[states]
print(f"sampled sequence: {seq!r}")
print(f"true colors:      {truth.tolist()}")

print("\nsweep of W and gamma (decoded colors, objective):")
for window in (0, 1, 2):
    for gamma in (0.1, 0.5, 2.0):
        ann, value = gain_decode(model, seq, GainParams(window, gamma))
        print(f"  W={window} gamma={gamma:3}: {ann.colors.tolist()}  obj={value:+.4f}")
print("growing W lets diffuse boundary mass accumulate; growing gamma")
print("suppresses boundaries that the posterior cannot pay for.")

print("\nbrute-force check on this instance (counting gain):")
params = GainParams(window=2, gamma=0.5)
ann, value = gain_decode(model, seq, params)
best_ann, best_value = brute_force_best_annotation(model, seq, params)
print(f"  decoder objective:        {value:.10f}")
print(f"  exhaustive best value:    {best_value:.10f}")
print(f"  decoder output expectation: "
      f"{brute_force_expected_gain(model, seq, ann, params):.10f}")
assert abs(value - best_value) < 1e-9

print("\ncounting vs indicator gain at W=0 (they coincide exactly):")
p0 = GainParams(window=0, gamma=0.5)
for kind in ("counting", "indicator"):
    v = brute_force_expected_gain(model, seq, ann, p0, kind)
    print(f"  {kind:9}: {v:.12f}")
