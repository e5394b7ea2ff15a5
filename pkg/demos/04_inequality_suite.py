"""Running the inequality checkers, gated and ungated.

Each checker returns a report with both sides, the slack, the certificates
it relied on, and a verdict. Checkers whose theorem needs sign hypotheses
refuse to issue a verdict when the certificates fail, unless explicitly
bypassed to demonstrate why the hypotheses matter.
"""

from poisson_ou import (
    GroundSpace,
    SemigroupEngine,
    TruncatedStateSpace,
    check_concentration,
    check_entropy_power,
    check_modified_lsi,
    check_poincare,
    check_restricted_hypercontractivity,
    check_talagrand,
    check_weak_hypercontractivity,
    exponential_functional,
    from_rule,
)

space = GroundSpace((1.0,))
engine = SemigroupEngine(space, TruncatedStateSpace.from_tail_mass(space))
F = exponential_functional(0.5)  # decreasing, positive, bounded by 1

for rep in (
    check_poincare(engine, F),
    check_modified_lsi(engine, F),
    check_entropy_power(engine, F, q=2.0),
    check_restricted_hypercontractivity(engine, F, t=0.5, p=2.0),
    check_weak_hypercontractivity(engine, F, t=0.5),
    check_talagrand(engine, F),
    check_concentration(engine, F, [0.3, 0.6]),
):
    print(f"{rep.name:32s} lhs={rep.lhs:.6f} rhs={rep.rhs:.6f} -> {rep.verdict}")

# gating in action: the Gaussian-type concentration bound needs DF <= 0.
# For the increasing functional F = c the Poisson upper tail eventually
# beats exp(-t^2/2), and bypassing the gate exposes that honestly.
count = from_rule(lambda c: float(c[0]), name="count")
gated = check_concentration(engine, count, [5.0])
print(f"gated:    {gated.verdict}")
bypassed = check_concentration(engine, count, [5.0], bypass_hypotheses=True)
print(f"bypassed: {bypassed.verdict} "
      f"(tail {bypassed.lhs:.3e} vs bound {bypassed.rhs:.3e})")
