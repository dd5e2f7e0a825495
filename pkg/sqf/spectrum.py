"""
Instantaneous spectra of H(s) = A(s) H_I + B(s) H_F on all 2^n basis states, with
H_I = -sum_i sigma_x^(i) and H_F the Ising model without its offset.
"""
import logging
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg

from sqf.base_type import check_finite
from sqf.exceptions import ValidationError, SizeLimitError, SQFError
from sqf.ising_model import IsingModel, freeze, spin_configurations, index_to_spins
from sqf.problem_generators import random_complete_ising
from sqf.samplers import exact_energies, level_boundaries, classical_spectrum
from sqf.settings import max_workers, MAX_SPECTRUM_VARS
from sqf.types import FreezeDirective

logger = logging.getLogger(__name__)

DEFAULT_ENERGY_SCALE = 5.0
DEFAULT_GRID_POINTS = 201


class AnnealSchedule:
    """
    Tabulated (s, A(s), B(s)) in GHz; values between points are linearly interpolated.
    """
    def __init__(self, points):
        points = [tuple(check_finite(value, 'Schedule value') for value in point) for point in points]
        if len(points) < 2 or any(len(point) != 3 for point in points):
            raise ValidationError('A schedule needs at least two (s, A, B) points')
        s, a, b = (np.array(column) for column in zip(*points))
        if s[0] != 0 or s[-1] != 1 or np.any(np.diff(s) <= 0):
            raise ValidationError('Schedule s must increase strictly from 0 to 1')
        if np.any(a < 0) or np.any(b < 0):
            raise ValidationError('Schedule energies must be non-negative')
        if np.any(np.diff(a) > 0) or np.any(np.diff(b) < 0):
            raise ValidationError('A(s) must be non-increasing and B(s) non-decreasing')
        scale = max(a.max(), b.max())
        if a[-1] > 0.01 * scale or b[0] > 0.01 * scale:
            logger.warning('Schedule endpoints are not close to zero (A(1)=%g, B(0)=%g)', a[-1], b[0])
        self._s, self._a, self._b = s, a, b

    @classmethod
    def linear(cls, energy_scale=DEFAULT_ENERGY_SCALE):
        return cls([(0.0, energy_scale, 0.0), (1.0, 0.0, energy_scale)])

    @property
    def points(self):
        return list(zip(self._s.tolist(), self._a.tolist(), self._b.tolist()))

    def A(self, s):
        return float(np.interp(s, self._s, self._a))

    def B(self, s):
        return float(np.interp(s, self._s, self._b))

    def __eq__(self, other):
        return isinstance(other, AnnealSchedule) and self.points == other.points

    def __repr__(self):
        return 'AnnealSchedule(%d points)' % len(self._s)


class SpectrumSweep:
    def __init__(self, s_grid, levels, k):
        self.s_grid = list(s_grid)
        self.levels = np.asarray(levels)
        self.k = k
        assert(self.levels.shape == (len(self.s_grid), k))


GapReport = namedtuple('GapReport', ['min_gap', 's_at_min', 'gap_curve'])

GapWidening = namedtuple('GapWidening', ['seed', 'gap_before', 'gap_after', 'ratio', 'label', 'value'])

GapScaling = namedtuple('GapScaling', ['rows', 'mean_gaps', 'decay_rate'])


def default_grid(points=DEFAULT_GRID_POINTS):
    return np.linspace(0.0, 1.0, points).tolist()


def _check_size(model):
    if model.num_vars > MAX_SPECTRUM_VARS:
        raise SizeLimitError('Dense spectra are limited to %d variables (model has %d)' %
                             (MAX_SPECTRUM_VARS, model.num_vars))


def _check_s(s):
    s = check_finite(s, 'Anneal fraction')
    if not 0 <= s <= 1:
        raise ValidationError('Anneal fraction must be in [0, 1] (is %r)' % s)
    return s


def _problem_diagonal(model):
    # the offset only shifts every eigenvalue
    problem = IsingModel(model.labels, model.biases, model.couplings)
    return problem.energies(spin_configurations(model.num_vars))


def _driver(n):
    """
    -sum_i sigma_x^(i) in the basis of `spin_configurations`.
    """
    dim = 2 ** n
    driver = np.zeros((dim, dim))
    states = np.arange(dim)
    for i in range(n):
        driver[states, states ^ (1 << (n - 1 - i))] -= 1.0
    return driver


def build_hamiltonian(model, sched, s):
    _check_size(model)
    s = _check_s(s)
    return sched.A(s) * _driver(model.num_vars) + np.diag(sched.B(s) * _problem_diagonal(model))


def sweep_spectrum(model, sched, s_grid=None, k=2):
    """
    The k lowest eigenvalues of H(s) at every s of the grid.
    """
    _check_size(model)
    if s_grid is None:
        s_grid = default_grid()
    s_grid = [_check_s(s) for s in s_grid]
    dim = 2 ** model.num_vars
    if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= dim:
        raise ValidationError('k must be between 1 and %d (is %r)' % (dim, k))

    driver = _driver(model.num_vars)
    diagonal = _problem_diagonal(model)

    def eigenvalues(s):
        hamiltonian = sched.A(s) * driver + np.diag(sched.B(s) * diagonal)
        return scipy.linalg.eigh(hamiltonian, eigvals_only=True, subset_by_index=[0, k - 1])

    with ThreadPoolExecutor(max_workers=max_workers()) as executor:
        levels = list(executor.map(eigenvalues, s_grid))
    return SpectrumSweep(s_grid, np.array(levels).reshape(len(s_grid), k), k)


def min_gap(sweep):
    if sweep.k < 2:
        raise ValidationError('A gap needs at least two levels (sweep has %d)' % sweep.k)
    gaps = sweep.levels[:, 1] - sweep.levels[:, 0]
    position = int(np.argmin(gaps))
    curve = [(s, float(gap)) for s, gap in zip(sweep.s_grid, gaps)]
    return GapReport(float(gaps[position]), sweep.s_grid[position], curve)


def discriminating_qubit(model):
    """
    The first label where the ground state and the lowest state of the next distinct
    energy differ, with its ground-state value. Degenerate levels are represented by
    their lexicographically smallest assignment.
    """
    energies = exact_energies(model)
    order = np.argsort(energies, kind='stable')
    starts = list(level_boundaries(energies[order])) + [len(order)]
    if len(starts) < 3:
        raise ValidationError('The model has a single energy level')
    ground = int(order[starts[0]:starts[1]].min())
    excited = int(order[starts[1]:starts[2]].min())

    spins = index_to_spins([ground, excited], model.num_vars)
    for i, label in enumerate(model.labels):
        if spins[0, i] != spins[1, i]:
            return label, int(spins[0, i])
    raise SQFError('Distinct assignments %d and %d do not differ' % (ground, excited))


def has_unique_ground_state(model):
    return classical_spectrum(model)[0][1] == 1


def gap_widening_experiment(n, seeds, schedule=None, s_grid=None):
    """
    For each seed whose random_complete_ising(n, seed) has a unique classical ground
    state: minimum gap of the model, then again after freezing its discriminating qubit
    to the ground-state value. The ratio is None when the gap before freezing is 0.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise ValidationError('The experiment needs at least 2 variables (is %r)' % (n,))
    if schedule is None:
        schedule = AnnealSchedule.linear()
    rows = []
    for seed in seeds:
        model = random_complete_ising(n, seed)
        if not has_unique_ground_state(model):
            logger.info('seed %d skipped: degenerate ground state', seed)
            continue
        before = min_gap(sweep_spectrum(model, schedule, s_grid)).min_gap
        label, value = discriminating_qubit(model)
        reduced = freeze(model, FreezeDirective({label: value}))
        after = min_gap(sweep_spectrum(reduced, schedule, s_grid)).min_gap
        ratio = after / before if before > 0 else None
        rows.append(GapWidening(seed, before, after, ratio, label, value))
    widened, mean_ratio = summarize_widening(rows)
    logger.info('gap widened on %d of %d instances; mean ratio %s', round(widened * len(rows)),
                len(rows), mean_ratio)
    return rows


def summarize_widening(rows):
    """
    (fraction of rows whose gap increased, mean of the defined ratios after/before or None)
    """
    ratios = [row.ratio for row in rows if row.ratio is not None]
    mean_ratio = float(np.mean(ratios)) if ratios else None
    if not rows:
        return 0.0, mean_ratio
    widened = sum(1 for row in rows if row.gap_after > row.gap_before)
    return widened / len(rows), mean_ratio


def gap_scaling(sizes, seeds, schedule=None, s_grid=None):
    """
    Minimum gap of random complete-graph instances against their size, and the slope of
    log(mean gap) over n.
    """
    if schedule is None:
        schedule = AnnealSchedule.linear()
    rows = []
    mean_gaps = {}
    for n in sizes:
        if isinstance(n, bool) or not isinstance(n, int) or not 2 <= n <= MAX_SPECTRUM_VARS:
            raise ValidationError('Sizes must be between 2 and %d (is %r)' % (MAX_SPECTRUM_VARS, n))
        gaps = []
        for seed in seeds:
            gap = min_gap(sweep_spectrum(random_complete_ising(n, seed), schedule, s_grid)).min_gap
            rows.append((n, seed, gap))
            gaps.append(gap)
        mean_gaps[n] = float(np.mean(gaps))

    fitted = [(n, gap) for n, gap in mean_gaps.items() if gap > 0]
    decay_rate = None
    if len(fitted) >= 2:
        x, y = zip(*fitted)
        decay_rate = float(np.polyfit(x, np.log(y), 1)[0])
    return GapScaling(rows, mean_gaps, decay_rate)
