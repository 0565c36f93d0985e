"""Shapiro-Wilk reference values from scipy (AS R94) for crates/core tests."""
import json

import numpy as np
import scipy.stats as st

rng = np.random.default_rng(11)
cases = {"weights": [148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236]}
for n in [4, 5, 6, 7, 11, 12, 25, 60, 300, 2000]:
    cases[f"normal_{n}"] = [round(float(v), 6) for v in rng.normal(10, 2, n)]
cases["exp_40"] = [round(float(v), 6) for v in rng.exponential(1, 40)]
cases["uniform_9"] = [round(float(v), 6) for v in rng.uniform(0, 1, 9)]

out = []
for name, x in cases.items():
    r = st.shapiro(x)
    out.append({"name": name, "x": x, "w": float(r.statistic), "p": float(r.pvalue)})
with open("crates/core/tests/data/shapiro_reference.json", "w") as f:
    json.dump(out, f, indent=1)
