"""
Figure datasets
===============

Each panel becomes a scatter CSV, one CSV per pinned-probability boundary
curve and a manifest. Plotting is left to whatever tool reads CSV.
"""

import json
import os
import tempfile

from trisqueeze import SamplerConfig
from trisqueeze.figures import FIGURE_IDS, FIGURES, figure_dataset

print("panels:", " ".join(FIGURE_IDS))

out = tempfile.mkdtemp()
files = figure_dataset("F3a", SamplerConfig(count=5000), out)
for path in files:
    print(" ", os.path.basename(path))

with open(os.path.join(out, "manifest.json")) as fh:
    manifest = json.load(fh)
print("\nseries:", FIGURES["F3a"].series[0][1:], "family", manifest["family"])
for curve in manifest["curves"]:
    ext = curve["extremum"]
    print(f"  {curve['file']:32s} pinned {curve['pinned_zero']}  best {curve['y']} = {ext['value']:.6f} at {curve['parameter']} = {ext['parameter']:.6f}")
