import numpy as np

Q2 = [[-1.0, 1.0], [2.0, -2.0]]

PARETO_BOTH = {"kind": "compound_poisson", "rate": 1.0, "jump": "pareto", "beta": 1.5, "side": "both", "scale": 1.0}
PARETO_PLUS_12 = {"kind": "compound_poisson", "rate": 1.0, "jump": "pareto", "beta": 1.2, "side": "+", "scale": 1.0}
TPL_3 = {
    "kind": "tempered_power_law",
    "c_plus": 1.0, "c_minus": 1.0,
    "beta_plus": 0.5, "beta_minus": 0.5,
    "theta_plus": 3.0, "theta_minus": 3.0,
}
GAUSS_CP = {"kind": "compound_poisson", "rate": 1.0, "jump": "gaussian", "mean": 0.0, "sd": 1.0}


def random_generator(rng, n, density=0.6):
    """Random irreducible conservative Q: a random Hamiltonian cycle plus
    extra edges."""
    Q = np.where(rng.random((n, n)) < density, rng.uniform(0.1, 3.0, (n, n)), 0.0)
    perm = rng.permutation(n)
    for k in range(n):
        i, j = perm[k], perm[(k + 1) % n]
        Q[i, j] = rng.uniform(0.1, 3.0)
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q
