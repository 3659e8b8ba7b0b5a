"""Covariance fixtures: identity (not an extreme correlation) and all-ones (extreme correlation)."""

import numpy as np

from qcovar.covariance import covariance
from qcovar.extremality import is_extreme
from qcovar.generators import example3, example4

np.set_printoptions(precision=4, suppress=True)

for n in (3, 5):
    d, xs = example3(n)
    rep = is_extreme(d, xs)
    print(f"identity fixture n={n}: extreme={rep.extreme} rank={rep.rank}")
    print(covariance(d, xs, real=True))

for n in (3, 4):
    d, xs = example4(n)
    rep = is_extreme(d, xs)
    print(f"all-ones fixture n={n}: extreme={rep.extreme} rank={rep.rank} span={rep.span_rank}/{rep.required}")
    print(covariance(d, xs, real=True))
