from sqf.base_type import LabelledType, check_spin
from sqf.exceptions import ValidationError


class SpinAssignment(LabelledType):
    """
    A map label -> spin in {-1, +1}. The label order is the insertion order.
    """
    def __init__(self, values=None):
        if values is None:
            values = {}
        values = dict(values)
        super().__init__(values.keys())
        self._values = tuple(check_spin(values[label], label) for label in self.labels)

    @classmethod
    def from_spins(cls, labels, spins):
        labels = list(labels)
        spins = [int(s) for s in spins]
        if len(labels) != len(spins):
            raise ValidationError('%d labels but %d spins' % (len(labels), len(spins)))
        return cls(zip(labels, spins))

    @property
    def _key(self):
        return tuple(sorted(zip(map(repr, self.labels), self._values)))

    def __getitem__(self, label):
        return self._values[self.index(label)]

    def __len__(self):
        return len(self._values)

    def __iter__(self):
        return iter(self.labels)

    def items(self):
        return zip(self.labels, self._values)

    @property
    def spins(self):
        return self._values

    def as_dict(self):
        return dict(self.items())

    def union(self, other):
        """
        Joins two assignments over disjoint label sets.
        """
        overlap = [label for label in other.labels if label in self]
        if overlap:
            raise ValidationError('Assignments overlap on %s' % ', '.join(map(str, overlap)))
        values = self.as_dict()
        values.update(other.as_dict())
        return SpinAssignment(values)

    def flipped(self):
        return SpinAssignment((label, -s) for label, s in self.items())

    def __repr__(self):
        return 'SpinAssignment(%s)' % ', '.join('%s=%+d' % item for item in self.items())


class FreezeDirective(SpinAssignment):
    """
    The set of labels to freeze and the values (+1/-1) they are frozen to.
    """
    @property
    def frozen(self):
        return self.as_dict()

    def __repr__(self):
        return 'FreezeDirective(%s)' % ', '.join('%s=%+d' % item for item in self.items())
