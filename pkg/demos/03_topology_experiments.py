"""Run the five separation experiments and print their report tables.

Each report carries its raw series; verdicts are recomputed from those
series alone, so a stored report can be re-audited later.
"""

import sigpath as sp

reports = [
    sp.experiment_product_vs_metric(k_max=5),
    sp.experiment_quotient_vs_metric(),
    sp.experiment_incompleteness(),
    sp.experiment_group_discontinuity(n_max=20),
    sp.length_lower_bound(
        sp.concat(sp.linear_path([1.0, 0.0]), sp.linear_path([0.0, 1.0])),
        n_max=5,
    ),
]

for rep in reports:
    print(rep.render_text())
    print("re-checked from stored series:", sp.recheck_verdict(rep))
    print()
