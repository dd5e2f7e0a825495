from unittest import TestCase

from sqf.base_type import LabelledType, check_finite
from sqf.exceptions import SQFError, ValidationError, FormatError
from sqf.types import SpinAssignment, FreezeDirective


class TestSpinAssignment(TestCase):

    def test_values(self):
        x = SpinAssignment({'a': 1, 'b': -1})
        self.assertEqual(('a', 'b'), x.labels)
        self.assertEqual((1, -1), x.spins)
        self.assertEqual(-1, x['b'])
        self.assertEqual(2, len(x))

    def test_equality_ignores_order(self):
        self.assertEqual(SpinAssignment({'a': 1, 'b': -1}), SpinAssignment({'b': -1, 'a': 1}))
        self.assertNotEqual(SpinAssignment({'a': 1}), SpinAssignment({'a': -1}))
        self.assertEqual(hash(SpinAssignment({0: 1, 1: 1})), hash(SpinAssignment({1: 1, 0: 1})))

    def test_invalid_spin(self):
        with self.assertRaises(ValidationError):
            SpinAssignment({'a': 0})
        with self.assertRaises(ValidationError):
            SpinAssignment({'a': True})

    def test_from_spins(self):
        self.assertEqual(SpinAssignment({0: -1, 1: 1}), SpinAssignment.from_spins([0, 1], [-1, 1]))
        with self.assertRaises(ValidationError):
            SpinAssignment.from_spins([0, 1], [1])

    def test_union(self):
        x = SpinAssignment({'a': 1}).union(SpinAssignment({'b': -1}))
        self.assertEqual({'a': 1, 'b': -1}, x.as_dict())
        with self.assertRaises(ValidationError):
            x.union(SpinAssignment({'a': -1}))

    def test_flipped(self):
        self.assertEqual(SpinAssignment({'a': -1, 'b': 1}), SpinAssignment({'a': 1, 'b': -1}).flipped())

    def test_unknown_label(self):
        with self.assertRaises(ValidationError):
            SpinAssignment({'a': 1})['b']

    def test_freeze_directive(self):
        directive = FreezeDirective({3: -1})
        self.assertEqual({3: -1}, directive.frozen)
        self.assertEqual('FreezeDirective(3=-1)', repr(directive))


class TestLabelledType(TestCase):

    def test_pair_is_canonical(self):
        labels = LabelledType(['x', 'y', 'z'])
        self.assertEqual(('x', 'z'), labels.pair('z', 'x'))
        self.assertEqual(('y', 'z'), labels.pair('y', 'z'))

    def test_self_pair(self):
        with self.assertRaises(ValidationError):
            LabelledType(['x']).pair('x', 'x')

    def test_distinct_labels(self):
        with self.assertRaises(ValidationError):
            LabelledType(['x', 'x'])

    def test_label_types(self):
        LabelledType([0, 'a'])
        with self.assertRaises(ValidationError):
            LabelledType([True])
        with self.assertRaises(ValidationError):
            LabelledType([1.5])

    def test_finite(self):
        self.assertEqual(2.0, check_finite(2, 'value'))
        with self.assertRaises(ValidationError):
            check_finite(float('nan'), 'value')
        with self.assertRaises(ValidationError):
            check_finite('x', 'value')


class TestExceptions(TestCase):

    def test_escaped_message(self):
        e = SQFError('two\nlines')
        self.assertEqual('two\\nlines', e.message)

    def test_as_dict(self):
        self.assertEqual({'error': 'FormatError', 'message': 'format:bad', 'position': [3, 4]},
                         FormatError('bad', (3, 4)).as_dict())
        self.assertEqual({'error': 'ValidationError', 'message': 'x', 'position': None},
                         ValidationError('x').as_dict())
