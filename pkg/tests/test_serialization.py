import os
import shutil
import tempfile
from unittest import TestCase

from sqf.exceptions import FormatError, ValidationError
from sqf.ising_model import IsingModel, QuboModel
from sqf.problem_generators import random_nae3sat
from sqf.samplers import SampleSet
from sqf.serialization import loads, dumps, model_to_dict, model_from_dict, problem_to_text, load_problem, \
    sample_set_to_dict, sample_set_from_dict, sample_set_to_csv, histogram_to_csv, histograms_to_csv, \
    load_schedule, sweep_to_csv, write_text
from sqf.spectrum import SpectrumSweep


class TestJson(TestCase):

    def test_syntax_error_position(self):
        with self.assertRaises(FormatError) as context:
            loads('{\n  "type": ising\n}')
        self.assertEqual((2, 11), context.exception.position)
        self.assertTrue(context.exception.message.startswith('format:'))

    def test_dumps(self):
        self.assertEqual('{\n  "a": 1\n}\n', dumps({'a': 1}))

    def test_dumps_rejects_non_finite(self):
        with self.assertRaises(FormatError):
            dumps({'ratio': float('inf')})
        with self.assertRaises(FormatError):
            dumps([float('nan')])


class TestProblems(TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_model(self):
        model = IsingModel(['x', 'y'], {'x': 0.1}, {('y', 'x'): -2.5}, offset=1.0)
        data = model_to_dict(model)
        self.assertEqual({'type': 'ising', 'labels': ['x', 'y'], 'linear': {'x': 0.1, 'y': 0.0},
                          'quadratic': [['x', 'y', -2.5]], 'offset': 1.0}, data)
        self.assertEqual(model, model_from_dict(loads(dumps(data))))

    def test_integer_labels(self):
        model = IsingModel([0, 1, 2], {2: 1.5}, {(0, 2): 1.0})
        self.assertEqual(model, model_from_dict(loads(dumps(model_to_dict(model)))))

    def test_qubo(self):
        q = QuboModel(['a'], {'a': 3.0})
        self.assertIsInstance(model_from_dict(model_to_dict(q)), QuboModel)

    def test_missing_field(self):
        with self.assertRaises(FormatError):
            model_from_dict({'type': 'ising', 'labels': [0]})
        with self.assertRaises(FormatError):
            model_from_dict({'type': 'potts', 'labels': [0], 'linear': {}, 'quadratic': [], 'offset': 0})
        with self.assertRaises(FormatError):
            model_from_dict({'type': 'ising', 'labels': [0], 'linear': {'1': 2.0}, 'quadratic': [], 'offset': 0})

    def test_invalid_model(self):
        with self.assertRaises(ValidationError):
            model_from_dict({'type': 'ising', 'labels': [0], 'linear': {}, 'quadratic': [[0, 0, 1.0]],
                             'offset': 0})

    def test_instance(self):
        instance = random_nae3sat(10, 2.1, seed=5, plant=True)
        path = os.path.join(self.directory, 'problem.json')
        write_text(path, problem_to_text(instance))
        model, loaded = load_problem(path)
        self.assertEqual(instance.model, model)
        self.assertEqual(instance.clauses, loaded.clauses)
        self.assertEqual(instance.planted, loaded.planted)
        self.assertEqual(2.1, loaded.rho)

    def test_plain_model_has_no_instance(self):
        path = os.path.join(self.directory, 'problem.json')
        write_text(path, problem_to_text(IsingModel(['a'])))
        self.assertIsNone(load_problem(path)[1])

    def test_schedule(self):
        path = os.path.join(self.directory, 'schedule.csv')
        write_text(path, 's,A_GHz,B_GHz\n0,4,0\n0.5,1,1\n1,0,3\n')
        schedule = load_schedule(path)
        self.assertEqual([(0.0, 4.0, 0.0), (0.5, 1.0, 1.0), (1.0, 0.0, 3.0)], schedule.points)

    def test_bad_schedule(self):
        path = os.path.join(self.directory, 'schedule.csv')
        write_text(path, 's,A_GHz,B_GHz\n0,4,0\n0.5,x,1\n')
        with self.assertRaises(FormatError) as context:
            load_schedule(path)
        self.assertEqual((3, 1), context.exception.position)

        write_text(path, '0,4,0\n0.5,4,1\n')
        with self.assertRaises(FormatError):
            load_schedule(path)


class TestSampleSets(TestCase):

    def setUp(self):
        self.samples = SampleSet(['a', 'b'], [[1, -1], [-1, -1]], [-1.5, 0.25], [3, 1])

    def test_dict(self):
        data = sample_set_to_dict(self.samples)
        self.assertEqual({'labels': ['a', 'b'], 'shots': 4, 'records': [
            {'assignment': [1, -1], 'energy': -1.5, 'count': 3},
            {'assignment': [-1, -1], 'energy': 0.25, 'count': 1}]}, data)
        self.assertEqual(self.samples, sample_set_from_dict(loads(dumps(data))))

    def test_wrong_shots(self):
        data = sample_set_to_dict(self.samples)
        data['shots'] = 5
        with self.assertRaises(FormatError):
            sample_set_from_dict(data)

    def test_csv(self):
        self.assertEqual('a,b,energy,count\n1,-1,-1.5,3\n-1,-1,0.25,1\n', sample_set_to_csv(self.samples))

    def test_histograms(self):
        self.assertEqual('energy,count\n-1.5,3\n0.25,1\n', histogram_to_csv(self.samples.histogram()))
        self.assertEqual('iteration,energy,count\n0,-1.5,3\n0,0.25,1\n1,-2.0,4\n',
                         histograms_to_csv([(0, self.samples.histogram()), (1, [(-2.0, 4)])]))

    def test_sweep(self):
        sweep = SpectrumSweep([0.0, 1.0], [[-1.0, 1.0], [-2.0, 0.5]], 2)
        self.assertEqual('s,E_0,E_1\n0.0,-1.0,1.0\n1.0,-2.0,0.5\n', sweep_to_csv(sweep))
