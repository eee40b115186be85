import random

from parcon.cohomology import cup_pair, random_combination
from parcon.curve import DifferentialForm
from parcon.exact import kernel
from parcon.scenario import SampleCounts, sample_admissible


def sample(sc, seed):
    """An admissible (gamma, pb) pair: off Sigma, inside V0."""
    gc, bc, gamma, pb, _ = sample_admissible(sc, random.Random(seed), SampleCounts())
    return gc, bc, gamma, pb


def kernel_gamma(sc, pb, rng):
    """A nonzero gamma with <gamma, b'> = 0, from the kernel of the pairing row."""
    row = [cup_pair(DifferentialForm.from_dxy(s), pb.bprime) for s in sc.gamma_basis]
    ker = kernel([row], len(row))
    coeffs = random_combination(rng, len(ker))
    v = [sum(c * k[i] for c, k in zip(coeffs, ker)) for i in range(len(row))]
    return v, sc.gamma_from(v)
