"""
Statistical qubit freezing: sample the model, measure every qubit's likeliness,
verify the freezing merit of the polarized ones, freeze them into the model and
repeat on the reduced model until nothing freezes.
"""
import logging
import math

import numpy as np

from sqf.base_type import check_finite, check_spin
from sqf.exceptions import ValidationError, EmptyConditionError
from sqf.ising_model import freeze, reconstruct
from sqf.samplers import SamplerParams, get_sampler
from sqf.types import FreezeDirective, SpinAssignment

logger = logging.getLogger(__name__)

VANILLA = 'vanilla'
PROGRESSIVE_THRESHOLD = 'progressive_threshold'
FIRST_M = 'first_m'
ONE_EACH_TIME = 'one_each_time'
STRATEGIES = (VANILLA, PROGRESSIVE_THRESHOLD, FIRST_M, ONE_EACH_TIME)

NO_FREEZE = 'no_freeze'
MAX_ITERATIONS = 'max_iterations'
FULLY_FROZEN = 'fully_frozen'


def _positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError('%s must be a positive integer (is %r)' % (name, value))
    return value


class SqfConfig:
    """
    Parameters of a freezing run. `shots` overrides the shot count of `sampler`.
    """
    def __init__(self, threshold=0.6, strategy=VANILLA, threshold_increment=0.05, increment_every=3,
                 m_limit=5, shots=1000, max_iterations=64, sampler=None):
        threshold = check_finite(threshold, 'Freezing threshold')
        if not 0 < threshold < 1:
            raise ValidationError('Freezing threshold must be in (0, 1) (is %r)' % threshold)
        if strategy not in STRATEGIES:
            raise ValidationError('Strategy must be one of %s (is "%s")' % (', '.join(STRATEGIES), strategy))
        threshold_increment = check_finite(threshold_increment, 'Threshold increment')
        if threshold_increment <= 0:
            raise ValidationError('Threshold increment must be positive (is %r)' % threshold_increment)
        if sampler is None:
            sampler = SamplerParams()

        self.threshold = threshold
        self.strategy = strategy
        self.threshold_increment = threshold_increment
        self.increment_every = _positive_int(increment_every, 'increment_every')
        self.m_limit = _positive_int(m_limit, 'm_limit')
        self.shots = _positive_int(shots, 'shots')
        self.max_iterations = _positive_int(max_iterations, 'max_iterations')
        self.sampler = sampler.replace(shots=self.shots)

    def effective_threshold(self, iteration):
        if self.strategy == PROGRESSIVE_THRESHOLD:
            return self.threshold + self.threshold_increment * (iteration // self.increment_every)
        return self.threshold

    def as_dict(self):
        return {
            'threshold': self.threshold,
            'strategy': self.strategy,
            'threshold_increment': self.threshold_increment,
            'increment_every': self.increment_every,
            'm_limit': self.m_limit,
            'shots': self.shots,
            'max_iterations': self.max_iterations,
            'sampler': self.sampler.as_dict(),
        }

    def __repr__(self):
        return 'SqfConfig(%s)' % ', '.join('%s=%r' % item for item in self.as_dict().items())


class FreezeRecord:
    def __init__(self, label, frozen_value, likeliness, merit, iteration):
        assert(abs(likeliness) <= 1)
        self.label = label
        self.frozen_value = check_spin(frozen_value, label)
        self.likeliness = float(likeliness)
        self.merit = float(merit)
        self.iteration = iteration

    def as_dict(self):
        return {'label': self.label, 'value': self.frozen_value, 'z': self.likeliness, 'merit': self.merit}

    def __repr__(self):
        return 'FreezeRecord(%s=%+d, z=%.3f, merit=%.3f, iteration=%d)' % (
            self.label, self.frozen_value, self.likeliness, self.merit, self.iteration)


class SqfIteration:
    """
    One sampling round: the model that was sampled, its samples, what froze and the
    running best energy after this round.
    """
    def __init__(self, iteration, model_before, sample_set, freezes, effective_threshold, best_energy_so_far):
        self.iteration = iteration
        self.model_before = model_before
        self.sample_set = sample_set
        self.freezes = freezes
        self.effective_threshold = effective_threshold
        self.best_energy_so_far = best_energy_so_far

    @property
    def active_count(self):
        return self.model_before.num_vars

    @property
    def directive(self):
        return FreezeDirective((record.label, record.frozen_value) for record in self.freezes)


class SqfRun:
    def __init__(self, model, config, iterations, final_model, best_assignment, best_energy,
                 terminated_reason):
        self.model = model
        self.config = config
        self.iterations = iterations
        self.final_model = final_model
        self.best_assignment = best_assignment
        self.best_energy = best_energy
        self.terminated_reason = terminated_reason

    @property
    def history(self):
        return [iteration.directive for iteration in self.iterations if iteration.freezes]

    @property
    def frozen(self):
        """
        Every frozen label with its value, in freezing order.
        """
        values = {}
        for directive in self.history:
            values.update(directive.as_dict())
        return values

    @property
    def terminal_assignment(self):
        """
        The assignment fixed by freezing alone, when every variable froze.
        """
        if self.final_model.num_vars:
            return None
        return reconstruct(SpinAssignment(), self.history, self.model.labels)

    @property
    def terminal_energy(self):
        return self.final_model.offset if self.final_model.num_vars == 0 else None


class BaselineRun:
    """
    Repeated sampling of the same model without freezing.
    """
    def __init__(self, sample_sets):
        self.sample_sets = sample_sets
        self.lowest_energies = [s.lowest.energy for s in sample_sets]
        best = int(np.argmin(self.lowest_energies))
        self.best_energy = self.lowest_energies[best]
        self.best_assignment = sample_sets[best].lowest.assignment
        self.mean_lowest = float(np.mean(self.lowest_energies))


def likeliness(s, i):
    """
    (shots with +1 - shots with -1) / shots for qubit `i`.
    """
    return float(np.dot(s.counts, s.column(i)) / s.total_shots)


def _condition(s, i, zbar):
    mask = s.column(i) == check_spin(zbar, i)
    weights = s.counts[mask]
    if weights.sum() == 0:
        raise EmptyConditionError('No shot has qubit "%s" equal to %+d' % (i, zbar))
    return mask, weights


def conditional_likeliness(s, j, i, zbar):
    """
    The likeliness of `j` over the shots in which qubit `i` equals `zbar`.
    """
    if i == j:
        raise ValidationError('Cannot condition qubit "%s" on itself' % (i,))
    mask, weights = _condition(s, i, zbar)
    return float(np.dot(weights, s.column(j)[mask]) / weights.sum())


def freezing_merit(model, s, i, zbar, conditional=True):
    """
    dE_i = h_i zbar + sum_j J_ij zbar z_j, where z_j is the likeliness of neighbour j
    conditioned on qubit i being zbar (unconditioned when `conditional` is False).
    """
    zbar = check_spin(zbar, i)
    merit = model.bias(i) * zbar
    neighbours = {j: J for j, J in model.neighbours(i).items() if J != 0.0}
    if not neighbours:
        return merit
    if conditional:
        mask, weights = _condition(s, i, zbar)
    else:
        mask, weights = slice(None), s.counts
    total = weights.sum()
    for j, J in neighbours.items():
        z = float(np.dot(weights, s.column(j)[mask]) / total)
        merit += J * zbar * z
    return merit


def _label_order(label):
    # integers sort before strings
    return isinstance(label, str), label


def select_candidates(s, cfg, iteration):
    """
    The (label, zbar) pairs to consider for freezing, strongest |z| first
    (ties in lexicographic label order).
    """
    scores = []
    for label in s.labels:
        z = likeliness(s, label)
        scores.append((-abs(z), _label_order(label), label, 1 if z > 0 else -1))
    scores.sort(key=lambda score: score[:2])

    if cfg.strategy == ONE_EACH_TIME:
        return [(label, zbar) for _, _, label, zbar in scores[:1]]

    threshold = cfg.effective_threshold(iteration)
    selected = [(label, zbar) for score, _, label, zbar in scores if -score > threshold]
    if cfg.strategy == FIRST_M:
        selected = selected[:cfg.m_limit]
    return selected


def sqf_step(model, cfg, iteration, sampler=None):
    """
    Samples `model`, freezes every candidate with negative merit (all merits are
    measured on the same samples) and returns (reduced model, samples, records).
    """
    if model.num_vars == 0:
        raise ValidationError('Cannot run a freezing step on a model without variables')
    if sampler is None:
        sampler = get_sampler(cfg.sampler.kind)
    params = cfg.sampler if iteration == 0 else cfg.sampler.derive(iteration)
    sample_set = sampler.sample(model, params)

    records = []
    for label, zbar in select_candidates(sample_set, cfg, iteration):
        try:
            merit = freezing_merit(model, sample_set, label, zbar)
        except EmptyConditionError as e:
            logger.warning('%s; using unconditioned likeliness', e.message)
            merit = freezing_merit(model, sample_set, label, zbar, conditional=False)
        # one-each-time freezes without looking at the merit
        if cfg.strategy == ONE_EACH_TIME or merit < 0:
            records.append(FreezeRecord(label, zbar, likeliness(sample_set, label), merit, iteration))

    directive = FreezeDirective((record.label, record.frozen_value) for record in records)
    return freeze(model, directive), sample_set, records


def run_sqf(model, cfg, sampler=None):
    """
    Repeats `sqf_step` until no qubit freezes, every qubit froze or
    `cfg.max_iterations` rounds ran.
    """
    if sampler is None:
        sampler = get_sampler(cfg.sampler.kind)

    current = model
    history = []
    iterations = []
    best_energy = math.inf
    best_assignment = None
    if model.num_vars == 0:
        best_energy, best_assignment = model.offset, SpinAssignment()
    reason = None
    for iteration in range(cfg.max_iterations):
        if current.num_vars == 0:
            reason = FULLY_FROZEN
            break
        reduced, sample_set, records = sqf_step(current, cfg, iteration, sampler)

        # reduced energies carry the frozen part in their offset, so they are full energies
        lowest = sample_set.lowest
        if lowest.energy < best_energy:
            best_energy = lowest.energy
            best_assignment = reconstruct(lowest.assignment, history, model.labels)

        iterations.append(SqfIteration(iteration, current, sample_set, records,
                                       cfg.effective_threshold(iteration), best_energy))
        logger.debug('iteration %d: %d active, threshold %.3f, %d frozen, lowest %r',
                     iteration, current.num_vars, cfg.effective_threshold(iteration), len(records),
                     lowest.energy)
        if not records:
            reason = NO_FREEZE
            break
        history.append(iterations[-1].directive)
        current = reduced
    else:
        reason = FULLY_FROZEN if current.num_vars == 0 else MAX_ITERATIONS

    logger.info('freezing stopped (%s) after %d iterations with %d of %d variables active; best %r',
                reason, len(iterations), current.num_vars, model.num_vars, best_energy)
    return SqfRun(model, cfg, iterations, current, best_assignment, best_energy, reason)


def run_baseline(model, params, repeats=8, sampler=None):
    """
    Samples `model` `repeats` times without freezing, each time with a derived seed.
    """
    _positive_int(repeats, 'repeats')
    if sampler is None:
        sampler = get_sampler(params.kind)
    sample_sets = [sampler.sample(model, params if r == 0 else params.derive(r)) for r in range(repeats)]
    return BaselineRun(sample_sets)
