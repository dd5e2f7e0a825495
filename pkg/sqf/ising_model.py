"""
Ising and QUBO models, classical energies, the QUBO <-> Ising transform and the
freezing algebra that absorbs fixed spins into biases and the offset.
"""
import numpy as np
import scipy.sparse

from sqf.base_type import LabelledType, check_finite
from sqf.exceptions import ValidationError, AssignmentMismatchError
from sqf.types import SpinAssignment, FreezeDirective


class QuadraticModel(LabelledType):
    """
    Linear terms, quadratic terms over canonical pairs, and a constant offset.
    Duplicate pair insertions, in either orientation, are summed.
    """
    def __init__(self, labels, linear=None, quadratic=None, offset=0.0):
        super().__init__(labels)

        if linear is None:
            linear = {}
        self._linear = {label: 0.0 for label in self.labels}
        for label, value in dict(linear).items():
            self.index(label)
            self._linear[label] += check_finite(value, 'Linear term of "%s"' % (label,))

        if quadratic is None:
            quadratic = {}
        if isinstance(quadratic, dict):
            quadratic = ((u, v, value) for (u, v), value in quadratic.items())
        self._quadratic = {}
        for u, v, value in quadratic:
            key = self.pair(u, v)
            value = check_finite(value, 'Quadratic term of (%s, %s)' % (u, v))
            self._quadratic[key] = self._quadratic.get(key, 0.0) + value

        self._offset = check_finite(offset, 'Offset')

    @property
    def linear(self):
        return dict(self._linear)

    @property
    def quadratic(self):
        return {key: self._quadratic[key] for key in self._sorted_pairs()}

    @property
    def offset(self):
        return self._offset

    def _sorted_pairs(self):
        return sorted(self._quadratic, key=lambda key: (self.index(key[0]), self.index(key[1])))

    @property
    def _key(self):
        return (self.labels,
                tuple(self._linear[label] for label in self.labels),
                tuple((key, self._quadratic[key]) for key in self._sorted_pairs()),
                self._offset)

    def neighbours(self, label):
        """
        Labels sharing a quadratic term with `label`, with the term's value.
        """
        self.index(label)
        result = {}
        for (u, v), value in self._quadratic.items():
            if u == label:
                result[v] = value
            elif v == label:
                result[u] = value
        return result

    def to_arrays(self):
        """
        Returns (linear vector, strictly upper-triangular quadratic matrix) in label order.
        """
        n = self.num_vars
        linear = np.array([self._linear[label] for label in self.labels], dtype=np.float64)
        quadratic = np.zeros((n, n), dtype=np.float64)
        for (u, v), value in self._quadratic.items():
            quadratic[self.index(u), self.index(v)] += value
        return linear, quadratic

    def adjacency(self):
        """
        The symmetric quadratic matrix as CSR (explicit zeros dropped).
        """
        n = self.num_vars
        rows, cols, data = [], [], []
        for (u, v), value in self._quadratic.items():
            if value != 0.0:
                i, j = self.index(u), self.index(v)
                rows += [i, j]
                cols += [j, i]
                data += [value, value]
        return scipy.sparse.csr_matrix((data, (rows, cols)), shape=(n, n), dtype=np.float64)

    def __repr__(self):
        return '%s(%d variables, %d quadratic terms, offset=%r)' % (
            self.__class__.__name__, self.num_vars, len(self._quadratic), self._offset)


class IsingModel(QuadraticModel):
    """
    E(s) = sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset, with s_i in {-1, +1}.
    """
    def __init__(self, labels, biases=None, couplings=None, offset=0.0):
        super().__init__(labels, biases, couplings, offset)

    @property
    def biases(self):
        return self.linear

    @property
    def couplings(self):
        return self.quadratic

    def bias(self, label):
        self.index(label)
        return self._linear[label]

    def coupling(self, u, v):
        return self._quadratic.get(self.pair(u, v), 0.0)

    def energies(self, spins):
        """
        Vectorised energies of the rows of `spins` (shape (r, n), columns in label order).
        """
        spins = np.asarray(spins, dtype=np.float64)
        if spins.ndim != 2 or spins.shape[1] != self.num_vars:
            raise AssignmentMismatchError(
                'Expected spins of shape (r, %d), got %s' % (self.num_vars, spins.shape))
        h, J = self.to_arrays()
        return spins @ h + np.einsum('ri,ri->r', spins @ J, spins) + self._offset


class QuboModel(QuadraticModel):
    """
    E(x) = sum_i c_i x_i + sum_{i<j} Q_ij x_i x_j + offset, with x_i in {0, 1}.
    """
    pass


def _check_covers(model, labels):
    missing = [label for label in model.labels if label not in labels]
    extra = [label for label in labels if label not in model]
    if missing or extra:
        raise AssignmentMismatchError(
            'Assignment does not match the model (missing: %s; extra: %s)' % (
                ', '.join(map(str, missing)) or '-', ', '.join(map(str, extra)) or '-'))


def energy(model, x):
    """
    The classical energy of the spin assignment `x`, offset included.
    """
    if not isinstance(x, SpinAssignment):
        x = SpinAssignment(x)
    _check_covers(model, x.labels)
    result = model.offset
    for label, h in model.biases.items():
        result += h * x[label]
    for (u, v), J in model.couplings.items():
        result += J * x[u] * x[v]
    return result


def qubo_energy(q, x):
    """
    The energy of the binary assignment `x` (a map label -> 0/1).
    """
    x = dict(x)
    for label, value in x.items():
        if isinstance(value, bool) or value not in (0, 1):
            raise ValidationError('Binary value of "%s" must be 0 or 1 (is %r)' % (label, value))
    _check_covers(q, list(x))
    result = q.offset
    for label, c in q.linear.items():
        result += c * x[label]
    for (u, v), value in q.quadratic.items():
        result += value * x[u] * x[v]
    return result


def qubo_to_ising(q):
    """
    Substitutes x = (s + 1) / 2.
    """
    biases = {label: c / 2 for label, c in q.linear.items()}
    offset = q.offset + sum(q.linear.values()) / 2
    couplings = {}
    for (u, v), value in q.quadratic.items():
        couplings[(u, v)] = value / 4
        biases[u] += value / 4
        biases[v] += value / 4
        offset += value / 4
    return IsingModel(q.labels, biases, couplings, offset)


def ising_to_qubo(model):
    """
    Substitutes s = 2x - 1.
    """
    linear = {label: 2 * h for label, h in model.biases.items()}
    offset = model.offset - sum(model.biases.values())
    quadratic = {}
    for (u, v), J in model.couplings.items():
        quadratic[(u, v)] = 4 * J
        linear[u] -= 2 * J
        linear[v] -= 2 * J
        offset += J
    return QuboModel(model.labels, linear, quadratic, offset)


def freeze(model, directive):
    """
    Fixes the spins of `directive` and returns the model over the remaining labels.

    Couplings between a frozen and an active spin become bias on the active one;
    frozen biases and couplings among frozen spins are absorbed into the offset.
    """
    if not isinstance(directive, FreezeDirective):
        directive = FreezeDirective(directive)
    for label in directive.labels:
        if label not in model:
            raise ValidationError('Cannot freeze unknown label "%s"' % (label,))

    active = [label for label in model.labels if label not in directive]
    biases = {label: model.bias(label) for label in active}
    offset = model.offset
    for label, z in directive.items():
        offset += model.bias(label) * z

    couplings = {}
    for (u, v), J in model.couplings.items():
        if u in directive and v in directive:
            offset += J * directive[u] * directive[v]
        elif u in directive:
            biases[v] += J * directive[u]
        elif v in directive:
            biases[u] += J * directive[v]
        else:
            couplings[(u, v)] = J
    return IsingModel(active, biases, couplings, offset)


def reconstruct(active, history, labels=None):
    """
    Maps an assignment of a reduced model back to the full model by joining
    every frozen value of `history`. When `labels` is given the result must
    cover exactly those labels and follows their order.
    """
    if not isinstance(active, SpinAssignment):
        active = SpinAssignment(active)
    result = SpinAssignment(active.items())
    for directive in history:
        result = result.union(directive)

    if labels is not None:
        labels = list(labels)
        missing = [label for label in labels if label not in result]
        extra = [label for label in result.labels if label not in set(labels)]
        if missing or extra:
            raise ValidationError('Reconstruction does not cover the model (missing: %s; extra: %s)' % (
                ', '.join(map(str, missing)) or '-', ', '.join(map(str, extra)) or '-'))
        result = SpinAssignment((label, result[label]) for label in labels)
    return result


def spin_configurations(n, start=0, stop=None):
    """
    The spin configurations with indices in [start, stop) as an int8 array.
    Bit n-1-i of the index is the spin of variable i (1 -> +1), so index order is
    lexicographic order with -1 < +1.
    """
    if stop is None:
        stop = 2 ** n
    return index_to_spins(np.arange(start, stop, dtype=np.int64), n)


def index_to_spins(indices, n):
    indices = np.asarray(indices, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (indices[:, None] >> shifts[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)
