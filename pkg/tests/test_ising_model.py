import itertools
from unittest import TestCase

import numpy as np

from sqf.exceptions import ValidationError, AssignmentMismatchError
from sqf.ising_model import IsingModel, QuboModel, energy, qubo_energy, qubo_to_ising, ising_to_qubo, \
    freeze, reconstruct, spin_configurations
from sqf.types import SpinAssignment, FreezeDirective


def random_model(rng, n):
    biases = {i: rng.uniform(-2, 2) for i in range(n)}
    couplings = [(i, j, rng.uniform(-1, 1)) for i, j in itertools.combinations(range(n), 2)
                 if rng.random() < 0.7]
    return IsingModel(range(n), biases, couplings, rng.uniform(-1, 1))


def brute_energy(model, values):
    result = model.offset
    for label, h in model.biases.items():
        result += h * values[label]
    for (u, v), J in model.couplings.items():
        result += J * values[u] * values[v]
    return result


class TestIsingModel(TestCase):

    def test_duplicate_couplings_are_summed(self):
        model = IsingModel(['a', 'b'], couplings=[('a', 'b', 1.0), ('b', 'a', 0.5)])
        self.assertEqual({('a', 'b'): 1.5}, model.couplings)
        self.assertEqual(1.5, model.coupling('b', 'a'))

    def test_missing_terms_are_zero(self):
        model = IsingModel(['a', 'b', 'c'], {'a': 1.0})
        self.assertEqual(0.0, model.bias('b'))
        self.assertEqual(0.0, model.coupling('a', 'c'))

    def test_self_coupling(self):
        with self.assertRaises(ValidationError):
            IsingModel(['a'], couplings={('a', 'a'): 1.0})

    def test_unknown_label(self):
        with self.assertRaises(ValidationError):
            IsingModel(['a'], {'b': 1.0})
        with self.assertRaises(ValidationError):
            IsingModel(['a'], couplings={('a', 'b'): 1.0})

    def test_not_finite(self):
        with self.assertRaises(ValidationError):
            IsingModel(['a'], {'a': float('inf')})
        with self.assertRaises(ValidationError):
            IsingModel(['a'], offset=float('nan'))

    def test_equality(self):
        self.assertEqual(IsingModel([0, 1], {0: 1}, {(1, 0): 2}), IsingModel([0, 1], {0: 1.0}, {(0, 1): 2.0}))
        self.assertNotEqual(IsingModel([0, 1], {0: 1}), IsingModel([0, 1], {0: 1}, offset=1))

    def test_neighbours(self):
        model = IsingModel('abc', couplings={('a', 'b'): 1.0, ('c', 'a'): -2.0})
        self.assertEqual({'b': 1.0, 'c': -2.0}, model.neighbours('a'))
        self.assertEqual({}, IsingModel('ab').neighbours('b'))

    def test_adjacency_is_symmetric(self):
        model = IsingModel('abc', couplings={('a', 'b'): 1.0, ('b', 'c'): 0.0})
        adjacency = model.adjacency().toarray()
        self.assertTrue(np.array_equal(adjacency, adjacency.T))
        self.assertEqual(2, model.adjacency().nnz)


class TestEnergy(TestCase):

    def test_energy(self):
        model = IsingModel(['a', 'b'], {'a': 1.0, 'b': -1.0}, {('a', 'b'): 0.5}, offset=2.0)
        self.assertEqual(2.5, energy(model, {'a': 1, 'b': 1}))
        self.assertEqual(-0.5, energy(model, {'a': -1, 'b': 1}))

    def test_mismatch(self):
        model = IsingModel(['a', 'b'])
        with self.assertRaises(AssignmentMismatchError):
            energy(model, {'a': 1})
        with self.assertRaises(AssignmentMismatchError):
            energy(model, {'a': 1, 'b': 1, 'c': 1})

    def test_empty_model(self):
        self.assertEqual(3.0, energy(IsingModel([], offset=3.0), {}))

    def test_vectorised_energies(self):
        rng = np.random.default_rng(3)
        model = random_model(rng, 5)
        spins = spin_configurations(5)
        expected = [brute_energy(model, dict(enumerate(row))) for row in spins.tolist()]
        self.assertTrue(np.allclose(expected, model.energies(spins), atol=1e-12))

    def test_energies_shape(self):
        with self.assertRaises(AssignmentMismatchError):
            IsingModel([0, 1]).energies(np.ones((3, 3)))

    def test_spin_configurations_order(self):
        self.assertEqual([[-1, -1], [-1, 1], [1, -1], [1, 1]], spin_configurations(2).tolist())
        self.assertEqual([[-1, 1], [1, -1]], spin_configurations(2, 1, 3).tolist())


class TestQubo(TestCase):

    def test_round_trip_energies(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(1, 8))
            linear = {i: rng.uniform(-2, 2) for i in range(n)}
            quadratic = {(i, j): rng.uniform(-2, 2) for i, j in itertools.combinations(range(n), 2)}
            q = QuboModel(range(n), linear, quadratic, rng.uniform(-1, 1))
            ising = qubo_to_ising(q)
            back = ising_to_qubo(ising)
            for bits in itertools.product((0, 1), repeat=n):
                x = dict(enumerate(bits))
                s = {i: 2 * b - 1 for i, b in x.items()}
                self.assertAlmostEqual(qubo_energy(q, x), energy(ising, s), delta=1e-9)
                self.assertAlmostEqual(qubo_energy(q, x), qubo_energy(back, x), delta=1e-9)

    def test_single_variable(self):
        # x = (s + 1) / 2
        ising = qubo_to_ising(QuboModel(['x'], {'x': 2.0}))
        self.assertEqual(1.0, ising.bias('x'))
        self.assertEqual(1.0, ising.offset)

    def test_binary_values(self):
        with self.assertRaises(ValidationError):
            qubo_energy(QuboModel(['x']), {'x': -1})


class TestFreeze(TestCase):

    def test_bias_absorption(self):
        model = IsingModel(['a', 'b', 'c'], {'a': 1.0, 'b': 0.5}, {('a', 'b'): 2.0, ('b', 'c'): -1.0}, 1.0)
        reduced = freeze(model, FreezeDirective({'a': -1}))
        self.assertEqual(('b', 'c'), reduced.labels)
        self.assertEqual(0.5 - 2.0, reduced.bias('b'))
        self.assertEqual({('b', 'c'): -1.0}, reduced.couplings)
        self.assertEqual(1.0 - 1.0, reduced.offset)

    def test_frozen_pairs_go_to_offset(self):
        model = IsingModel(['a', 'b'], couplings={('a', 'b'): 3.0})
        reduced = freeze(model, {'a': 1, 'b': -1})
        self.assertEqual(0, reduced.num_vars)
        self.assertEqual(-3.0, reduced.offset)

    def test_empty_directive(self):
        model = IsingModel(['a', 'b'], {'a': 1.0}, {('a', 'b'): 1.0})
        self.assertEqual(model, freeze(model, FreezeDirective()))

    def test_unknown_label(self):
        with self.assertRaises(ValidationError):
            freeze(IsingModel(['a']), {'b': 1})

    def test_energies_are_preserved(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            model = random_model(rng, n)
            size = int(rng.integers(1, n))
            frozen = rng.choice(n, size=size, replace=False)
            directive = FreezeDirective({int(i): int(rng.choice([-1, 1])) for i in frozen})
            reduced = freeze(model, directive)
            active = [i for i in range(n) if i not in directive]
            self.assertEqual(tuple(active), reduced.labels)
            for spins in itertools.product((-1, 1), repeat=len(active)):
                values = dict(zip(active, spins))
                values.update(directive.as_dict())
                self.assertAlmostEqual(brute_energy(model, values), energy(reduced, dict(zip(active, spins))),
                                       delta=1e-9)

    def test_compositional(self):
        rng = np.random.default_rng(2)
        model = random_model(rng, 6)
        twice = freeze(freeze(model, {1: 1, 4: -1}), {0: -1})
        once = freeze(model, {1: 1, 4: -1, 0: -1})
        self.assertEqual(once.labels, twice.labels)
        spins = spin_configurations(3)
        self.assertTrue(np.allclose(once.energies(spins), twice.energies(spins), atol=1e-12))

    def test_reconstructed_energy(self):
        rng = np.random.default_rng(5)
        model = random_model(rng, 6)
        history = [FreezeDirective({2: 1}), FreezeDirective({0: -1, 5: -1})]
        reduced = model
        for directive in history:
            reduced = freeze(reduced, directive)
        for spins in itertools.product((-1, 1), repeat=3):
            active = SpinAssignment(zip(reduced.labels, spins))
            full = reconstruct(active, history, model.labels)
            self.assertAlmostEqual(energy(reduced, active), energy(model, full), delta=1e-9)

    def test_reconstruct(self):
        history = [FreezeDirective({'a': 1}), FreezeDirective({'c': -1})]
        full = reconstruct(SpinAssignment({'b': -1}), history, ['a', 'b', 'c'])
        self.assertEqual(('a', 'b', 'c'), full.labels)
        self.assertEqual((1, -1, -1), full.spins)

    def test_reconstruct_must_cover(self):
        with self.assertRaises(ValidationError):
            reconstruct(SpinAssignment({'b': -1}), [FreezeDirective({'a': 1})], ['a', 'b', 'c'])
        with self.assertRaises(ValidationError):
            reconstruct(SpinAssignment({'a': -1}), [FreezeDirective({'a': 1})])
