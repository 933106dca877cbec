"""Tour of the truncated tensor algebra: products, exp/log, the inverse."""

import numpy as np

import sigpath as sp

d, depth = 2, 4

# the algebra unit 1 + 0 + 0 + ...
one = sp.unit(d, depth)
print("unit scalar:", one.scalar)

# exponential of a single segment: levels v^k / k!
v = np.array([1.0, -0.5])
g = sp.exp_segment(v, depth)
print("exp(v) level 1:", g.levels[1])
print("exp(v) level 2 norm:", sp.level_norm(g, 2))

# log undoes exp
back = sp.log(g)
print("log(exp(v)) level 1:", back.levels[1])

# group inverse via the geometric series; two-sided to rounding
inv = sp.inverse_psi(g)
left = sp.mul(inv, g)
print("inverse residual:", sp.max_coefficient_difference(left, one))

# the product-topology metric weights level k by 2^-k and clamps at 1
e1 = sp.exp_segment(np.array([1.0, 0.0]), 2)
print("product metric to unit:", sp.product_metric(sp.unit(2, 2), e1))

# shuffle identity: for a signature, <S, u shuffle w> = <S,u><S,w>
path = sp.PiecewiseLinearPath(2, np.array([[1.0, 0.2], [-0.3, 0.8], [0.5, 0.1]]))
s = sp.signature(path, depth)
lhs, rhs = sp.shuffle_pairing(s, (1,), (2,))
print(f"shuffle pairing: {lhs:.12f} vs {rhs:.12f}")

# adjacent-pair contraction phi on level 2 of exp(v) gives |v|^2/2
print("phi contraction:", sp.phi_contraction(g, 1), "=", (v @ v) / 2)
