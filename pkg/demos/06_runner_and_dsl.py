"""The experiment runner: configs, the functional mini-language, reports.

Functionals are given as text ("2*exp_neg(0.5, 0) - 1"), checks as a list
with parameter grids, and the runner writes one report record per check and
parameter point, deterministically, so runs diff cleanly. The same engine
is reachable from the command line:

    poisson-ou run configs/onedim_suite.json --out reports
    poisson-ou list-checks
    poisson-ou example counterexample_fk k_max=30 --out reports
"""

import json
import tempfile
from pathlib import Path

from poisson_ou import functional_from_text, parse, serialize
from poisson_ou.cli import list_checks, main

# the mini-language round-trips through its canonical form
text = "2*exp_neg(0.5, 0) - indicator_le(0, 3) + 1"
expr = parse(text)
print("canonical form:", serialize(expr))
F = functional_from_text(text)
print("values at c=0..4:", [F((n,)) for n in range(5)])

print("\navailable checks:")
print(list_checks())

config = {
    "space": {"weights": [1.0]},
    "seed": 0,
    "functionals": {"f": "exp_neg(0.5, 0)"},
    "checks": [
        {"check": "poincare", "functional": "f"},
        {"check": "restricted-hypercontractivity", "functional": "f",
         "params": {"t": [0.5, 1.0], "p": 2.0}},
    ],
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "config.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    code = main(["run", str(path), "--out", tmp])
    print(f"\nrunner exit code: {code}")
    print((Path(tmp) / "report.txt").read_text(encoding="utf-8"))
