"""How a state map induces a map on interventions.

A low intervention i is sent to the high intervention whose restriction
set is exactly the image of i's restriction set under the state map; when
no high intervention fits, i has no induced image. The induced map is the
bridge between the distribution-level checks and the abstraction checks.
"""

from cak import (
    ALL,
    Assignment,
    EMPTY,
    compute_induced_sets,
    derive_omega_tau,
    enumerate_interventions,
    rst,
)
from cak.corpus import build_disjunctive_merge

main, forced = build_disjunctive_merge()
low = main.low.with_allowed(ALL)
high, tau = main.high, main.tau

print("low model: three independent bits X1, X2, X3")
print("high model: two bits Y1, Y2")
print("state map: Y1 = X1 or X3, Y2 = X2 or X3\n")

for iv in (EMPTY, Assignment(X3=0), Assignment(X3=1), Assignment(X1=0), Assignment(X1=0, X2=0)):
    images = sorted({tau.apply(s) for s in rst(low.signature.endogenous, iv)})
    induced = derive_omega_tau(low, high, tau, iv)
    label = dict(iv) if iv else "(empty)"
    target = "undefined" if induced is None else (dict(induced) if induced else "(empty)")
    print(f"intervention {str(label):20s} image size {len(images)}  ->  {target}")

print(
    "\nBoth the empty intervention and X3:=0 land on the empty high"
    "\nintervention: forcing X3 to 0 leaves the high model free exactly"
    "\nlike not intervening at all. Images with three elements fit no"
    "\nrestriction set, so those interventions have no induced image."
)

i_low, i_high, omega_tau = compute_induced_sets(low, high, tau)
print(f"\ninduced low set: {len(i_low)} of {len(enumerate_interventions(low))} interventions")
print(f"induced high set: {len(i_high)} of {len(enumerate_interventions(high))} interventions")

undefined = [i for i in enumerate_interventions(low) if i not in set(i_low)]
print("undefined:", [dict(i) for i in undefined])

print(
    "\nThe clash between the empty intervention and X3:=0 is what breaks"
    "\nthe abstraction check on the full induced set; allowing only"
    "\ninterventions that force X3 to 0 removes it:"
)
from cak import check_tau_abstraction

for bundle in (main, forced):
    report = check_tau_abstraction(bundle.low, bundle.high, bundle.tau)
    print(f"  {bundle.name:35s} -> {report.verdict}")
