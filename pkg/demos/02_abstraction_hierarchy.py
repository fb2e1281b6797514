"""Walk the abstraction hierarchy over the bundled examples.

The checks, from weakest to strongest:

  exact          one low distribution, one high distribution, equal
                 interventional pushforwards for every allowed intervention
  uniform        the same, but achievable for *every* low distribution
  abstraction    the intervention map is no longer free: it must be the one
                 the state map induces, the state map must be surjective,
                 and a surjective compatible context map must exist
  strong         every high intervention must be induced
  constructive   the state map must also factor over a partition of the
                 low variables, one cell per high variable

Each bundle below was chosen to separate two adjacent levels.
"""

from cak import check_exact, check_tau_abstraction, check_uniform
from cak.corpus import (
    build_chain_vs_independent,
    build_unrelated_pair,
    evaluate_bundle,
    get_bundle,
)

print("=" * 72)
print("exact but not uniform: two unrelated single-variable models")
print("=" * 72)
fwd, rev = build_unrelated_pair()
for b in (fwd, rev):
    exact = check_exact(b.low, b.low_dist, b.high, b.high_dist, b.tau, b.omega)
    uniform = check_uniform(b.low, b.high, b.tau, b.omega)
    print(f"{b.name}: exact={exact.verdict}, uniform={uniform.verdict}")
    if not uniform.verdict:
        print(f"  refusal: {uniform.detail}")
print(
    "\nPoint-mass distributions hide everything the models disagree about;"
    "\nquantifying over all distributions exposes the context with no"
    "\ncounterpart."
)

print()
print("=" * 72)
print("uniform but not an abstraction: a chain vs. an independent pair")
print("=" * 72)
c_fwd, c_rev, c_ident = build_chain_vs_independent()
print("joint maps:    uniform =", check_uniform(c_fwd.low, c_fwd.high, c_fwd.tau, c_fwd.omega).verdict)
print("identity map:  uniform =", check_uniform(c_ident.low, c_ident.high, c_ident.tau, c_ident.omega).verdict)
report = check_tau_abstraction(c_fwd.low, c_fwd.high, c_fwd.tau)
print("abstraction:  ", report.verdict, "-", report.detail)
print(
    "\nWith the identity state map the induced intervention map is the"
    "\nidentity, and under it no context map reconciles the two models."
)

print()
print("=" * 72)
print("abstraction but not strong / strong and constructive: pixel grids")
print("=" * 72)
two = get_bundle("pixel2-two-counter")
merged = get_bundle("pixel2-merged")
for bundle in (two, merged):
    print(f"\n{bundle.name}: {bundle.description}")
    for check, report in evaluate_bundle(bundle).items():
        print(f"  {check:15s} {report.verdict}   {report.detail}")
print(
    "\nTwo overlapping counters cannot be intervened on separately, so the"
    "\nstrong check names a lone counter setting no low intervention"
    "\ninduces; merging them into one union count removes the obstacle."
)
