import math

from sqf.exceptions import ValidationError


def check_label(label):
    # bool is an int subclass but never a valid variable name
    if isinstance(label, bool) or not isinstance(label, (int, str)):
        raise ValidationError('Label %r must be a string or an integer' % (label,))
    return label


def check_finite(value, what):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError('%s must be a real number (is %r)' % (what, value))
    if not math.isfinite(value):
        raise ValidationError('%s must be finite (is %r)' % (what, value))
    return value


def check_spin(value, label):
    if isinstance(value, bool) or value not in (-1, 1):
        raise ValidationError('Spin of "%s" must be -1 or +1 (is %r)' % (label, value))
    return int(value)


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2 ** 64:
        raise ValidationError('seed must be an integer in [0, 2^64) (is %r)' % (seed,))
    return seed


class BaseType:
    """
    Base of the immutable value types. Equality and hashing are defined over `_key`,
    which subclasses build from their defining data.
    """
    @property
    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, self.__class__) and self._key == other._key

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash(self._key)


class LabelledType(BaseType):
    """
    A value type defined over an ordered list of distinct labels.

    The label order is the canonical order: couplings are keyed by pairs (u, v)
    with u before v, and array representations follow it.
    """
    def __init__(self, labels):
        labels = tuple(check_label(label) for label in labels)
        self._index = {label: i for i, label in enumerate(labels)}
        if len(self._index) != len(labels):
            raise ValidationError('Labels must be distinct')
        self._labels = labels

    @property
    def labels(self):
        return self._labels

    @property
    def num_vars(self):
        return len(self._labels)

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError('Unknown label "%s"' % (label,))

    def __contains__(self, label):
        return label in self._index

    def pair(self, u, v):
        """
        The canonical key of the unordered pair {u, v}.
        """
        iu, iv = self.index(u), self.index(v)
        if iu == iv:
            raise ValidationError('Self-coupling on "%s" is not allowed' % (u,))
        return (u, v) if iu < iv else (v, u)
