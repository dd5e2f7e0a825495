"""
Samplers standing in for the quantum annealer: a simulated-annealing sampler,
an exact Boltzmann sampler, and exhaustive enumeration of small models.
"""
import logging
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numba
import numpy as np

from sqf.base_type import check_finite, check_seed
from sqf.exceptions import ValidationError, SizeLimitError
from sqf.ising_model import spin_configurations, index_to_spins
from sqf.settings import max_workers, MAX_ENUMERATION_VARS
from sqf.types import SpinAssignment

logger = logging.getLogger(__name__)

EXACT = 'exact'
SIMULATED_ANNEALING = 'simulated_annealing'
SAMPLER_KINDS = (EXACT, SIMULATED_ANNEALING)

# energies closer than this (relative to the energy scale) are one level
LEVEL_TOLERANCE = 1e-9

_ENUMERATION_CHUNK = 2 ** 16
_SHOTS_PER_TASK = 64


Record = namedtuple('Record', ['assignment', 'energy', 'count'])


def derive_seed(seed, *keys):
    """
    A 32-bit seed that depends only on `seed` and `keys`.
    """
    return int(np.random.SeedSequence([seed] + list(keys)).generate_state(1)[0])


class SamplerParams:
    def __init__(self, kind=SIMULATED_ANNEALING, shots=1000, seed=0, sa_sweeps=1000,
                 sa_beta_range=(0.1, 10.0)):
        if kind not in SAMPLER_KINDS:
            raise ValidationError('Sampler kind must be one of %s (is "%s")' % (', '.join(SAMPLER_KINDS), kind))
        if isinstance(shots, bool) or not isinstance(shots, int) or shots < 1:
            raise ValidationError('shots must be a positive integer (is %r)' % (shots,))
        if isinstance(sa_sweeps, bool) or not isinstance(sa_sweeps, int) or sa_sweeps < 1:
            raise ValidationError('sa_sweeps must be a positive integer (is %r)' % (sa_sweeps,))
        beta_min, beta_max = (check_finite(beta, 'Inverse temperature') for beta in sa_beta_range)
        if not 0 < beta_min < beta_max:
            raise ValidationError('Inverse temperatures must be positive and increasing (are %r, %r)' %
                                  (beta_min, beta_max))
        self.kind = kind
        self.shots = shots
        self.seed = check_seed(seed)
        self.sa_sweeps = sa_sweeps
        self.sa_beta_range = (beta_min, beta_max)

    def derive(self, *keys):
        """
        A copy whose seed is derived from this seed and `keys`.
        """
        return self.replace(seed=derive_seed(self.seed, *keys))

    def replace(self, **changes):
        values = self.as_dict()
        values.update(changes)
        return SamplerParams(**values)

    def as_dict(self):
        return {
            'kind': self.kind,
            'shots': self.shots,
            'seed': self.seed,
            'sa_sweeps': self.sa_sweeps,
            'sa_beta_range': self.sa_beta_range,
        }

    def __eq__(self, other):
        return isinstance(other, SamplerParams) and self.as_dict() == other.as_dict()

    def __repr__(self):
        return 'SamplerParams(%s)' % ', '.join('%s=%r' % item for item in self.as_dict().items())


def level_boundaries(sorted_energies):
    """
    Indices where a new energy level starts in an ascending array.
    """
    if len(sorted_energies) == 0:
        return np.zeros(0, dtype=np.int64)
    scale = max(1.0, float(np.max(np.abs(sorted_energies))))
    jumps = np.nonzero(np.diff(sorted_energies) > LEVEL_TOLERANCE * scale)[0] + 1
    return np.concatenate(([0], jumps))


def group_levels(energies, counts=None):
    """
    Groups ascending energies into (energy, total count) levels.
    """
    energies = np.asarray(energies, dtype=np.float64)
    if counts is None:
        counts = np.ones(len(energies), dtype=np.int64)
    order = np.argsort(energies, kind='stable')
    energies, counts = energies[order], np.asarray(counts)[order]
    starts = level_boundaries(energies)
    totals = np.add.reduceat(counts, starts) if len(starts) else []
    return [(float(energies[start]), int(total)) for start, total in zip(starts, totals)]


class SampleSet:
    """
    Distinct spin assignments over `labels` with their energies and multiplicities,
    sorted ascending by energy (ties in lexicographic spin order).
    `presorted` skips the spin check and the sort for records already in that order.
    """
    def __init__(self, labels, samples, energies, counts, presorted=False):
        self._labels = tuple(labels)
        energies = np.asarray(energies, dtype=np.float64)
        samples = np.asarray(samples, dtype=np.int8)
        counts = np.asarray(counts, dtype=np.int64)
        if samples.ndim != 2 or samples.shape[1] != len(self._labels):
            raise ValidationError('Samples must have one column per label')
        if not (len(samples) == len(energies) == len(counts)):
            raise ValidationError('Samples, energies and counts differ in length')
        if len(counts) == 0 or np.any(counts < 1):
            raise ValidationError('A sample set needs records with positive counts')
        if not presorted:
            if np.any((samples != 1) & (samples != -1)):
                raise ValidationError('Samples must contain only -1 and +1')
            keys = tuple(samples[:, j] for j in reversed(range(samples.shape[1]))) + (energies,)
            order = np.lexsort(keys)
            samples, energies, counts = samples[order], energies[order], counts[order]
        self._samples = samples
        self._energies = energies
        self._counts = counts
        self._samples.setflags(write=False)
        self._energies.setflags(write=False)
        self._counts.setflags(write=False)
        self._index = {label: i for i, label in enumerate(self._labels)}

    @classmethod
    def from_samples(cls, model, spins):
        """
        Aggregates raw shots (rows of `spins` in the model's label order).
        """
        spins = np.asarray(spins, dtype=np.int8)
        if model.num_vars == 0:
            return cls((), np.zeros((1, 0), dtype=np.int8), [model.offset], [len(spins)])
        unique, counts = np.unique(spins, axis=0, return_counts=True)
        return cls(model.labels, unique, model.energies(unique), counts)

    def check_energies(self, model, tolerance=1e-9):
        """
        Raises when a record's energy disagrees with `model`.
        """
        if tuple(model.labels) != self._labels:
            raise ValidationError('Sample set labels differ from the model labels')
        if len(self._labels) == 0:
            expected = np.full(len(self._energies), model.offset)
        else:
            expected = model.energies(self._samples)
        worst = float(np.max(np.abs(expected - self._energies)))
        if worst > tolerance:
            raise ValidationError('Sample energies differ from the model by up to %g' % worst)

    @property
    def labels(self):
        return self._labels

    @property
    def samples(self):
        return self._samples

    @property
    def energies(self):
        return self._energies

    @property
    def counts(self):
        return self._counts

    @property
    def total_shots(self):
        return int(self._counts.sum())

    def __len__(self):
        return len(self._counts)

    def column(self, label):
        try:
            return self._samples[:, self._index[label]]
        except KeyError:
            raise ValidationError('Label "%s" is not in the sample set' % (label,))

    def record(self, i):
        return Record(SpinAssignment.from_spins(self._labels, self._samples[i]),
                      float(self._energies[i]), int(self._counts[i]))

    @property
    def records(self):
        return [self.record(i) for i in range(len(self))]

    @property
    def lowest(self):
        return self.record(0)

    def histogram(self):
        return group_levels(self._energies, self._counts)

    def mean_energy(self):
        return float(np.dot(self._energies, self._counts) / self.total_shots)

    def __eq__(self, other):
        return (isinstance(other, SampleSet) and self._labels == other._labels and
                np.array_equal(self._samples, other._samples) and
                np.array_equal(self._energies, other._energies) and
                np.array_equal(self._counts, other._counts))

    def __repr__(self):
        return 'SampleSet(%d variables, %d records, %d shots, lowest=%r)' % (
            len(self._labels), len(self), self.total_shots, float(self._energies[0]))


@numba.njit(nogil=True)
def _anneal(h, indptr, indices, data, betas, seeds, out):
    # single-spin-flip Metropolis; one row of `out` per seed
    n = h.shape[0]
    for k in range(seeds.shape[0]):
        np.random.seed(seeds[k])
        spins = out[k]
        for i in range(n):
            if np.random.random() < 0.5:
                spins[i] = 1
            else:
                spins[i] = -1
        for beta in betas:
            order = np.random.permutation(n)
            for position in range(n):
                i = order[position]
                field = h[i]
                for p in range(indptr[i], indptr[i + 1]):
                    field += data[p] * spins[indices[p]]
                delta = -2.0 * spins[i] * field
                if delta <= 0.0 or np.random.random() < np.exp(-beta * delta):
                    spins[i] = -spins[i]


class Sampler:
    """
    Produces a SampleSet of a model. Subclasses implement `_sample` for models with
    at least one variable.
    """
    kind = None

    def sample(self, model, params):
        if params.kind != self.kind:
            raise ValidationError('%s cannot run with "%s" parameters' % (self.__class__.__name__, params.kind))
        if model.num_vars == 0:
            return SampleSet.from_samples(model, np.zeros((params.shots, 0), dtype=np.int8))
        start = time.perf_counter()
        result = self._sample(model, params)
        logger.debug('%s: %d shots on %d variables in %.3fs', self.kind, params.shots,
                     model.num_vars, time.perf_counter() - start)
        return result

    def _sample(self, model, params):
        raise NotImplementedError


class SimulatedAnnealingSampler(Sampler):
    """
    Every shot starts from an independent uniformly random configuration and performs
    `sa_sweeps` sweeps of a geometric inverse-temperature schedule. Shots are seeded
    individually, so the result does not depend on how shots are spread over threads.
    """
    kind = SIMULATED_ANNEALING

    def _sample(self, model, params):
        adjacency = model.adjacency()
        h = model.to_arrays()[0]
        betas = np.geomspace(params.sa_beta_range[0], params.sa_beta_range[1], params.sa_sweeps)
        seeds = np.array([derive_seed(params.seed, k) for k in range(params.shots)], dtype=np.uint32)
        out = np.empty((params.shots, model.num_vars), dtype=np.int8)

        def task(start):
            stop = min(start + _SHOTS_PER_TASK, params.shots)
            _anneal(h, adjacency.indptr, adjacency.indices, adjacency.data, betas,
                    seeds[start:stop], out[start:stop])

        starts = range(0, params.shots, _SHOTS_PER_TASK)
        with ThreadPoolExecutor(max_workers=min(max_workers(), len(starts))) as executor:
            list(executor.map(task, starts))
        return SampleSet.from_samples(model, out)


class ExactSampler(Sampler):
    """
    Draws shots from the exact Boltzmann distribution at the final inverse temperature
    `sa_beta_range[1]`, by enumerating every configuration.
    """
    kind = EXACT

    def _sample(self, model, params):
        energies = exact_energies(model)
        weights = np.exp(-params.sa_beta_range[1] * (energies - energies.min()))
        rng = np.random.default_rng(params.seed)
        chosen = rng.choice(len(energies), size=params.shots, p=weights / weights.sum())
        return SampleSet.from_samples(model, index_to_spins(chosen, model.num_vars))


SAMPLERS = {
    SIMULATED_ANNEALING: SimulatedAnnealingSampler,
    EXACT: ExactSampler,
}


def get_sampler(kind):
    try:
        return SAMPLERS[kind]()
    except KeyError:
        raise ValidationError('Unknown sampler "%s"' % kind)


def sample(model, params):
    return get_sampler(params.kind).sample(model, params)


def _check_enumerable(model):
    if model.num_vars > MAX_ENUMERATION_VARS:
        raise SizeLimitError('Exact enumeration is limited to %d variables (model has %d)' %
                             (MAX_ENUMERATION_VARS, model.num_vars))


def exact_energies(model):
    """
    Energies of all 2^n configurations, in the index order of `spin_configurations`.
    """
    _check_enumerable(model)
    n = model.num_vars
    if n == 0:
        return np.array([model.offset])
    total = 2 ** n
    chunks = []
    for start in range(0, total, _ENUMERATION_CHUNK):
        chunks.append(model.energies(spin_configurations(n, start, min(start + _ENUMERATION_CHUNK, total))))
    return np.concatenate(chunks)


def enumerate_exact(model):
    """
    One record per configuration (multiplicity 1); the first record is a global minimum.
    """
    n = model.num_vars
    energies = exact_energies(model)
    # index order is lexicographic, so a stable sort by energy is the sample set order
    order = np.argsort(energies, kind='stable')
    samples = np.empty((len(order), n), dtype=np.int8)
    for start in range(0, len(order), _ENUMERATION_CHUNK):
        stop = start + _ENUMERATION_CHUNK
        samples[start:stop] = index_to_spins(order[start:stop], n)
    return SampleSet(model.labels, samples, energies[order], np.ones(len(order), dtype=np.int64),
                     presorted=True)


def classical_spectrum(model):
    """
    Distinct classical energies with their degeneracies, ascending.
    """
    return group_levels(exact_energies(model))
