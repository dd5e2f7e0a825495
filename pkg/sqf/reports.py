"""
Plot-ready descriptions of runs: the per-iteration run report, the evolution of the
problem graph, baseline comparisons and the manifest written next to every output.
"""
from datetime import datetime, timezone

import sqf
from sqf.exceptions import FormatError
from sqf.problem_generators import satisfaction_ratio

ACTIVE = 'active'


def _ratio(energy, instance):
    if instance is None:
        return None
    return satisfaction_ratio(energy, instance.num_clauses)


def run_report(run, instance=None):
    iterations = []
    for iteration in run.iterations:
        lowest = iteration.sample_set.lowest.energy
        iterations.append({
            'iteration': iteration.iteration,
            'active_count': iteration.active_count,
            'effective_threshold': iteration.effective_threshold,
            'frozen': [record.as_dict() for record in iteration.freezes],
            'lowest_energy': lowest,
            'best_energy_so_far': iteration.best_energy_so_far,
            'satisfaction_ratio': _ratio(lowest, instance),
            'histogram': [[energy, count] for energy, count in iteration.sample_set.histogram()],
        })
    terminal = run.terminal_assignment
    return {
        'config': run.config.as_dict(),
        'labels': list(run.model.labels),
        'terminated_reason': run.terminated_reason,
        'best_energy': run.best_energy,
        'best_assignment': list(run.best_assignment.spins),
        'best_satisfaction_ratio': _ratio(run.best_energy, instance),
        'final_active_count': run.final_model.num_vars,
        'final_offset': run.final_model.offset,
        'terminal_energy': run.terminal_energy,
        'terminal_assignment': list(terminal.spins) if terminal is not None else None,
        'iterations': iterations,
    }


def _state(value):
    return 'frozen:%+d' % value


def graph_evolution(run):
    """
    For every iteration, the state of each variable (in label order) when it was
    sampled and the couplings still between active variables; a last entry shows
    the final model.
    """
    labels = list(run.model.labels)
    frozen = {}
    snapshots = []
    models = [(iteration.iteration, iteration.model_before) for iteration in run.iterations]
    models.append((len(run.iterations), run.final_model))
    directives = [iteration.directive for iteration in run.iterations]
    for position, (number, model) in enumerate(models):
        snapshots.append({
            'iteration': number,
            'final': position == len(models) - 1,
            'states': [_state(frozen[label]) if label in frozen else ACTIVE for label in labels],
            'edges': [[u, v] for (u, v), J in model.couplings.items() if J != 0.0],
        })
        if position < len(directives):
            frozen.update(directives[position].as_dict())
    return {'labels': labels, 'snapshots': snapshots}


def baseline_report(baseline, instance=None):
    return {
        'repeats': len(baseline.sample_sets),
        'lowest_energies': baseline.lowest_energies,
        'best_energy': baseline.best_energy,
        'mean_lowest': baseline.mean_lowest,
        'best_assignment': list(baseline.best_assignment.spins),
        'best_satisfaction_ratio': _ratio(baseline.best_energy, instance),
    }


def widening_report(rows, summary):
    fraction, mean_ratio = summary
    return {
        'rows': [row._asdict() for row in rows],
        'widened_fraction': fraction,
        'mean_ratio': mean_ratio,
    }


def scaling_report(scaling):
    return {
        'rows': [{'n': n, 'seed': seed, 'min_gap': gap} for n, seed, gap in scaling.rows],
        'mean_gaps': [[n, gap] for n, gap in scaling.mean_gaps.items()],
        'decay_rate': scaling.decay_rate,
    }


class RunManifest:
    """
    Everything needed to re-execute a command: its resolved argument list and
    configuration, the tool version and where it read and wrote.
    """
    def __init__(self, command, argv, config, seeds, inputs, outputs, version=None, timestamp=None):
        self.command = command
        self.argv = list(argv)
        self.config = config
        self.seeds = list(seeds)
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self.version = version if version is not None else sqf.__version__
        if timestamp is None:
            timestamp = datetime.now(timezone.utc).isoformat()
        self.timestamp = timestamp

    def as_dict(self):
        return {
            'command': self.command,
            'argv': self.argv,
            'config': self.config,
            'seeds': self.seeds,
            'inputs': self.inputs,
            'outputs': self.outputs,
            'version': self.version,
            'timestamp': self.timestamp,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data['command'], data['argv'], data['config'], data['seeds'], data['inputs'],
                       data['outputs'], data['version'], data['timestamp'])
        except (KeyError, TypeError) as e:
            raise FormatError('manifest: missing or invalid field %s' % e)
