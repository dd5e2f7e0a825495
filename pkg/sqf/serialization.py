"""
Readers and writers of the problem, sample set, schedule and spectrum files.

JSON floats are written with their shortest round-trip representation, so a
model survives dump/load unchanged.
"""
import csv
import io
import json

from sqf.exceptions import FormatError, SQFError
from sqf.ising_model import IsingModel, QuboModel
from sqf.problem_generators import Nae3SatInstance
from sqf.samplers import SampleSet
from sqf.spectrum import AnnealSchedule
from sqf.types import SpinAssignment


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, (e.lineno, e.colno))


def dumps(data):
    try:
        return json.dumps(data, indent=2, allow_nan=False) + '\n'
    except ValueError as e:
        raise FormatError(str(e))


def read_text(path):
    with open(path, encoding='utf-8') as f:
        return f.read()


def write_text(path, text):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def _field(data, key, types, where):
    if not isinstance(data, dict) or key not in data:
        raise FormatError('%s: missing "%s"' % (where, key))
    value = data[key]
    if not isinstance(value, types) or isinstance(value, bool) and bool not in types:
        raise FormatError('%s: "%s" has the wrong type (%s)' % (where, key, type(value).__name__))
    return value


def model_to_dict(model):
    return {
        'type': 'qubo' if isinstance(model, QuboModel) else 'ising',
        'labels': list(model.labels),
        'linear': {str(label): value for label, value in model.linear.items()},
        'quadratic': [[u, v, value] for (u, v), value in model.quadratic.items()],
        'offset': model.offset,
    }


def model_from_dict(data):
    kind = _field(data, 'type', (str,), 'problem')
    if kind not in ('ising', 'qubo'):
        raise FormatError('problem: unknown type "%s"' % kind)
    labels = _field(data, 'labels', (list,), 'problem')
    by_name = {str(label): label for label in labels}
    linear = {}
    for name, value in _field(data, 'linear', (dict,), 'problem').items():
        if name not in by_name:
            raise FormatError('problem: linear term of unknown label "%s"' % name)
        linear[by_name[name]] = value
    quadratic = []
    for term in _field(data, 'quadratic', (list,), 'problem'):
        if not isinstance(term, list) or len(term) != 3:
            raise FormatError('problem: quadratic terms must be [label, label, value] (is %r)' % (term,))
        quadratic.append(tuple(term))
    offset = _field(data, 'offset', (int, float), 'problem')
    cls = QuboModel if kind == 'qubo' else IsingModel
    return cls(labels, linear, quadratic, offset)


def instance_to_dict(instance):
    data = model_to_dict(instance.model)
    data['rho'] = instance.rho
    data['clauses'] = [[[label, polarity] for label, polarity in clause] for clause in instance.clauses]
    data['planted'] = list(instance.planted.spins) if instance.planted is not None else None
    return data


def instance_from_dict(data):
    clauses = []
    for clause in _field(data, 'clauses', (list,), 'problem'):
        if not isinstance(clause, list) or any(not isinstance(literal, list) or len(literal) != 2
                                               for literal in clause):
            raise FormatError('problem: clauses must be lists of [variable, polarity] (is %r)' % (clause,))
        clauses.append([tuple(literal) for literal in clause])
    labels = _field(data, 'labels', (list,), 'problem')
    planted = data.get('planted')
    if planted is not None:
        planted = SpinAssignment.from_spins(labels, planted)
    return Nae3SatInstance(len(labels), clauses, planted, data.get('rho'))


def problem_to_text(problem):
    if isinstance(problem, Nae3SatInstance):
        return dumps(instance_to_dict(problem))
    return dumps(model_to_dict(problem))


def load_problem(path):
    """
    Returns (model, instance); instance is None unless the file carries NAE3SAT clauses.
    """
    data = loads(read_text(path))
    model = model_from_dict(data)
    instance = instance_from_dict(data) if 'clauses' in data else None
    return model, instance


def sample_set_to_dict(sample_set):
    return {
        'labels': list(sample_set.labels),
        'shots': sample_set.total_shots,
        'records': [{'assignment': [int(s) for s in spins], 'energy': float(energy), 'count': int(count)}
                    for spins, energy, count in zip(sample_set.samples, sample_set.energies, sample_set.counts)],
    }


def sample_set_from_dict(data):
    labels = _field(data, 'labels', (list,), 'sample set')
    records = _field(data, 'records', (list,), 'sample set')
    shots = _field(data, 'shots', (int,), 'sample set')
    samples = [_field(record, 'assignment', (list,), 'record') for record in records]
    energies = [_field(record, 'energy', (int, float), 'record') for record in records]
    counts = [_field(record, 'count', (int,), 'record') for record in records]
    result = SampleSet(labels, samples, energies, counts)
    if result.total_shots != shots:
        raise FormatError('sample set: counts add up to %d, not %d shots' % (result.total_shots, shots))
    return result


def _csv_text(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def sample_set_to_csv(sample_set):
    rows = [[int(s) for s in spins] + [repr(float(energy)), int(count)]
            for spins, energy, count in zip(sample_set.samples, sample_set.energies, sample_set.counts)]
    return _csv_text([str(label) for label in sample_set.labels] + ['energy', 'count'], rows)


def histogram_to_csv(histogram):
    return _csv_text(['energy', 'count'], [[repr(energy), count] for energy, count in histogram])


def histograms_to_csv(histograms):
    """
    `histograms` holds (iteration, histogram) pairs.
    """
    return _csv_text(['iteration', 'energy', 'count'],
                     [[i, repr(energy), count] for i, histogram in histograms for energy, count in histogram])


def load_schedule(path):
    """
    A CSV with columns s, A_GHz, B_GHz; a non-numeric first row is taken as the header.
    """
    points = []
    with open(path, encoding='utf-8', newline='') as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                point = tuple(float(cell) for cell in row)
            except ValueError:
                if row_number == 1:
                    continue
                raise FormatError('schedule: row is not numeric', (row_number, 1))
            if len(point) != 3:
                raise FormatError('schedule: expected 3 columns, got %d' % len(point), (row_number, 1))
            points.append(point)
    try:
        return AnnealSchedule(points)
    except SQFError as e:
        raise FormatError('schedule: %s' % e.message)


def sweep_to_csv(sweep):
    header = ['s'] + ['E_%d' % i for i in range(sweep.k)]
    rows = [[repr(s)] + [repr(float(e)) for e in levels] for s, levels in zip(sweep.s_grid, sweep.levels)]
    return _csv_text(header, rows)


def gap_report_to_dict(report):
    return {'min_gap': report.min_gap, 's_at_min': report.s_at_min}
