"""
Running the law suite
=====================

Every check in the catalog instantiates one structural law on a small
instance and either passes or returns a counterexample.  We run the whole
catalog on generated and curated instances, then swap in a backend whose
dependent product is subtly wrong and see which laws notice.
"""

from collections import Counter

from pshtopos.verify import (
    CHECK_IDS,
    MUTANTS,
    InstanceGenerator,
    curated_instances,
    generate_instances,
    run_suite,
)

instances = list(generate_instances(InstanceGenerator(seed=0), 20)) + curated_instances()
results = run_suite(CHECK_IDS, instances)
print(Counter(r.verdict for r in results))

###############################################################################
# One line per check.

by_check = Counter((r.check_id, r.verdict) for r in results)
for cid in CHECK_IDS:
    print(f"{cid:<18} pass {by_check[cid, 'pass']:>3}  fail {by_check[cid, 'fail']:>3}")

###############################################################################
# This backend doubles every f_* x by a two-point factor.  The counit and the
# transposition still typecheck, so only laws that depend on the universal
# property can see the damage.

broken = run_suite(CHECK_IDS, curated_instances(), backend=MUTANTS["broken-pushforward"])
caught = Counter(r.check_id for r in broken if r.verdict == "fail")
print("caught by:", dict(caught))
first = next(r for r in broken if r.verdict == "fail")
print(first.check_id, first.instance, first.witness["reason"])
