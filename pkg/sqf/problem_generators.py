"""
Seeded benchmark problems: complete-graph random Ising models and (planted)
not-all-equal 3-SAT encoded as Ising models.
"""
from itertools import combinations

import numpy as np

from sqf.base_type import check_spin, check_seed
from sqf.exceptions import ValidationError
from sqf.ising_model import IsingModel
from sqf.types import SpinAssignment

DEFAULT_RHO = 2.1


def random_complete_ising(n, seed=0):
    """
    K_n with biases uniform in [-2, 2] and couplings uniform in [-1, 1]; labels 0..n-1.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError('Number of variables must be a positive integer (is %r)' % (n,))
    rng = np.random.default_rng(check_seed(seed))
    biases = rng.uniform(-2, 2, size=n)
    couplings = [(i, j, rng.uniform(-1, 1)) for i, j in combinations(range(n), 2)]
    return IsingModel(range(n), dict(enumerate(biases)), couplings)


def _literals(clause, assignment):
    return [polarity * assignment[label] for label, polarity in clause]


def is_nae_satisfied(clause, assignment):
    values = _literals(clause, assignment)
    return not all(value == values[0] for value in values)


def clause_couplings(clause):
    """
    The three couplings of a clause: p_a p_b on every pair. The clause then contributes
    -1 when its literals are not all equal and +3 when they are.
    """
    return [(a, b, pa * pb) for (a, pa), (b, pb) in combinations(clause, 2)]


class Nae3SatInstance:
    def __init__(self, num_vars, clauses, planted=None, rho=None):
        if isinstance(num_vars, bool) or not isinstance(num_vars, int) or num_vars < 3:
            raise ValidationError('NAE3SAT needs at least 3 variables (has %r)' % (num_vars,))
        self.num_vars = num_vars
        self.clauses = []
        for clause in clauses:
            clause = tuple((label, check_spin(polarity, label)) for label, polarity in clause)
            labels = [label for label, _ in clause]
            if len(clause) != 3 or len(set(labels)) != 3:
                raise ValidationError('Clause %r must have 3 distinct variables' % (clause,))
            for label in labels:
                if label not in range(num_vars):
                    raise ValidationError('Clause variable %r is not in 0..%d' % (label, num_vars - 1))
            self.clauses.append(clause)
        if not self.clauses:
            raise ValidationError('NAE3SAT needs at least one clause')

        self.rho = rho
        self.planted = planted
        if planted is not None:
            for clause in self.clauses:
                if not is_nae_satisfied(clause, planted):
                    raise ValidationError('Planted assignment violates clause %r' % (clause,))

        couplings = [term for clause in self.clauses for term in clause_couplings(clause)]
        self.model = IsingModel(range(num_vars), couplings=couplings)

    @property
    def num_clauses(self):
        return len(self.clauses)

    @property
    def ground_energy_bound(self):
        return -self.num_clauses

    def __repr__(self):
        return 'Nae3SatInstance(%d variables, %d clauses, planted=%s)' % (
            self.num_vars, self.num_clauses, self.planted is not None)


def random_nae3sat(n, rho=DEFAULT_RHO, seed=0, plant=True):
    """
    round(rho * n) clauses over distinct uniformly drawn variables with uniform polarities.
    When planting, a hidden assignment is drawn first and each clause's polarities are
    redrawn until the assignment satisfies it.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise ValidationError('NAE3SAT needs at least 3 variables (is %r)' % (n,))
    if not rho > 0:
        raise ValidationError('Clause-to-variable ratio must be positive (is %r)' % (rho,))
    num_clauses = int(round(rho * n))
    if num_clauses < 1:
        raise ValidationError('rho * n must round to at least one clause (is %r)' % (rho * n))

    rng = np.random.default_rng(check_seed(seed))
    planted = None
    if plant:
        planted = SpinAssignment.from_spins(range(n), rng.choice([-1, 1], size=n))

    clauses = []
    for _ in range(num_clauses):
        labels = [int(label) for label in rng.choice(n, size=3, replace=False)]
        while True:
            clause = tuple(zip(labels, (int(p) for p in rng.choice([-1, 1], size=3))))
            if planted is None or is_nae_satisfied(clause, planted):
                break
        clauses.append(clause)
    return Nae3SatInstance(n, clauses, planted, rho)


def satisfied_clauses(instance, assignment):
    return sum(1 for clause in instance.clauses if is_nae_satisfied(clause, assignment))


def satisfaction_ratio(energy, n_cl):
    """
    1 - (E - E_min) / (4 N_cl) with E_min = -N_cl: the satisfied fraction implied by E.
    """
    if isinstance(n_cl, bool) or not isinstance(n_cl, int) or n_cl < 1:
        raise ValidationError('Number of clauses must be a positive integer (is %r)' % (n_cl,))
    return 1 - (energy + n_cl) / (4 * n_cl)
