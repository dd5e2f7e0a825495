import argparse
import json
import logging
import os
import sys

import sqf
from sqf.core import SqfConfig, STRATEGIES, PROGRESSIVE_THRESHOLD, run_sqf, run_baseline
from sqf.exceptions import SQFError, ValidationError
from sqf.ising_model import QuboModel, energy, freeze, qubo_to_ising, ising_to_qubo
from sqf.problem_generators import random_complete_ising, random_nae3sat, DEFAULT_RHO
from sqf.reports import (run_report, graph_evolution, baseline_report, widening_report, scaling_report,
                         RunManifest)
from sqf.samplers import SamplerParams, SAMPLER_KINDS, SIMULATED_ANNEALING, sample
from sqf.serialization import (dumps, loads, read_text, write_text, load_problem, problem_to_text,
                               model_to_dict, sample_set_to_dict, sample_set_to_csv, histogram_to_csv,
                               histograms_to_csv, load_schedule, sweep_to_csv, gap_report_to_dict)
from sqf.spectrum import (AnnealSchedule, sweep_spectrum, min_gap, discriminating_qubit, default_grid,
                          gap_widening_experiment, summarize_widening, gap_scaling, DEFAULT_GRID_POINTS)
from sqf.types import FreezeDirective

logger = logging.getLogger('sqfreeze')

MANIFEST = 'manifest.json'

STRATEGY_ALIASES = {'progressive': PROGRESSIVE_THRESHOLD}


class Workspace:
    """
    Writes the outputs of one command into its output directory.
    """
    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.outputs = []

    def path(self, name):
        return name if os.path.isabs(name) else os.path.join(self.out_dir, name)

    def write(self, name, text):
        path = self.path(name)
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        write_text(path, text)
        self.outputs.append(path)
        return path


def strategy(value):
    value = value.replace('-', '_')
    return STRATEGY_ALIASES.get(value, value)


def int_list(value):
    """
    Comma separated integers and inclusive ranges, e.g. `0-4,7`.
    """
    result = []
    try:
        for part in value.split(','):
            if '-' in part.strip()[1:]:
                start, stop = part.rsplit('-', 1)
                result.extend(range(int(start), int(stop) + 1))
            else:
                result.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError('"%s" is not a list of integers' % value)
    if not result:
        raise argparse.ArgumentTypeError('"%s" is an empty list' % value)
    return result


def _sampler_params(args, shots=None):
    return SamplerParams(args.sampler, args.shots if shots is None else shots, args.seed, args.sweeps,
                         (args.beta_min, args.beta_max))


def _ising(model):
    return qubo_to_ising(model) if isinstance(model, QuboModel) else model


def _schedule(args):
    if args.schedule is None:
        return AnnealSchedule.linear()
    return load_schedule(args.schedule)


def cmd_generate(args, workspace):
    if args.kind == 'ising':
        problem = random_complete_ising(args.n, args.seed)
        config = {'kind': 'ising', 'n': args.n, 'seed': args.seed}
    else:
        problem = random_nae3sat(args.n, args.rho, args.seed, args.plant)
        config = {'kind': 'nae3sat', 'n': args.n, 'rho': args.rho, 'seed': args.seed, 'plant': args.plant}
    workspace.write(args.output, problem_to_text(problem))
    return config, [args.seed], []


def _write_sample_set(workspace, name, sample_set, output_format):
    if output_format == 'csv':
        workspace.write(name + '.csv', sample_set_to_csv(sample_set))
    else:
        workspace.write(name + '.json', dumps(sample_set_to_dict(sample_set)))


def cmd_solve(args, workspace):
    model, instance = load_problem(args.problem)
    model = _ising(model)
    params = _sampler_params(args)
    if args.repeats is None:
        sample_set = sample(model, params)
        baseline = None
    else:
        baseline = run_baseline(model, params, args.repeats)
        sample_set = baseline.sample_sets[0]
    sample_set.check_energies(model)

    _write_sample_set(workspace, 'samples', sample_set, args.format)
    workspace.write('histogram.csv', histogram_to_csv(sample_set.histogram()))
    config = {'sampler': params.as_dict(), 'repeats': args.repeats}
    if baseline is not None:
        workspace.write('baseline.json', dumps(baseline_report(baseline, instance)))
        for r, repeat in enumerate(baseline.sample_sets[1:], start=1):
            _write_sample_set(workspace, 'samples_%d' % r, repeat, args.format)
    return config, [params.seed], [args.problem]


def cmd_sqf(args, workspace):
    model, instance = load_problem(args.problem)
    model = _ising(model)
    config = SqfConfig(args.threshold, args.strategy, args.increment, args.every, args.m_limit, args.shots,
                       args.max_iterations, _sampler_params(args))
    run = run_sqf(model, config)
    if run.best_assignment is not None and abs(energy(model, run.best_assignment) - run.best_energy) > 1e-9:
        raise SQFError('Best assignment energy %r differs from the reported %r' % (
            energy(model, run.best_assignment), run.best_energy))

    workspace.write('report.json', dumps(run_report(run, instance)))
    workspace.write('histograms.csv', histograms_to_csv(
        [(iteration.iteration, iteration.sample_set.histogram()) for iteration in run.iterations]))
    workspace.write('graph.json', dumps(graph_evolution(run)))
    if args.keep_samples:
        for iteration in run.iterations:
            _write_sample_set(workspace, 'samples_%d' % iteration.iteration, iteration.sample_set, args.format)
    return config.as_dict(), [args.seed], [args.problem]


def _sweep_outputs(workspace, model, schedule, s_grid, k, suffix=''):
    sweep = sweep_spectrum(model, schedule, s_grid, k)
    workspace.write('sweep%s.csv' % suffix, sweep_to_csv(sweep))
    report = min_gap(sweep) if k >= 2 else None
    if report is not None:
        workspace.write('gap%s.json' % suffix, dumps(gap_report_to_dict(report)))
    return report


def cmd_spectrum(args, workspace):
    schedule = _schedule(args)
    s_grid = default_grid(args.grid)
    config = {'schedule': schedule.points, 'grid': args.grid, 'k': args.k}
    inputs = [args.schedule] if args.schedule is not None else []

    if args.scaling is not None:
        scaling = gap_scaling(args.scaling, args.seeds, schedule, s_grid)
        workspace.write('scaling.json', dumps(scaling_report(scaling)))
        config.update(scaling=args.scaling)
        return config, args.seeds, inputs
    if args.widening is not None:
        rows = gap_widening_experiment(args.widening, args.seeds, schedule, s_grid)
        workspace.write('widening.json', dumps(widening_report(rows, summarize_widening(rows))))
        config.update(widening=args.widening)
        return config, args.seeds, inputs
    if args.problem is None:
        raise ValidationError('spectrum needs a problem file, --scaling or --widening')

    model, _ = load_problem(args.problem)
    model = _ising(model)
    before = _sweep_outputs(workspace, model, schedule, s_grid, args.k)
    if args.freeze_discriminating:
        if before is None:
            raise ValidationError('--freeze-discriminating needs k >= 2')
        label, value = discriminating_qubit(model)
        after = _sweep_outputs(workspace, freeze(model, FreezeDirective({label: value})), schedule, s_grid,
                               args.k, '_frozen')
        workspace.write('widening.json', dumps({
            'label': label,
            'value': value,
            'gap_before': before.min_gap,
            'gap_after': after.min_gap,
            'ratio': after.min_gap / before.min_gap if before.min_gap > 0 else None,
        }))
        config.update(freeze_discriminating=True)
    return config, [], inputs + [args.problem]


def cmd_convert(args, workspace):
    model, _ = load_problem(args.problem)
    if args.to == 'ising':
        converted = _ising(model)
    else:
        converted = model if isinstance(model, QuboModel) else ising_to_qubo(model)
    workspace.write(args.output, dumps(model_to_dict(converted)))
    return {'to': args.to}, [], [args.problem]


COMMANDS = {
    'generate': cmd_generate,
    'solve': cmd_solve,
    'sqf': cmd_sqf,
    'spectrum': cmd_spectrum,
    'convert': cmd_convert,
}


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='Seed of every random choice (default 0)')
    common.add_argument('--out-dir', default=None,
                        help='Directory the outputs and the manifest are written to (default: current)')
    common.add_argument('--format', choices=('json', 'csv'), default='json',
                        help='Format of sample set files')
    common.add_argument('-v', '--verbose', action='store_true', help='Log progress to stderr')
    return common


def _add_sampler_arguments(parser):
    parser.add_argument('--sampler', choices=SAMPLER_KINDS, default=SIMULATED_ANNEALING)
    parser.add_argument('--shots', type=int, default=1000)
    parser.add_argument('--sweeps', type=int, default=1000, help='Annealing sweeps per shot')
    parser.add_argument('--beta-min', type=float, default=0.1)
    parser.add_argument('--beta-max', type=float, default=10.0,
                        help='Final inverse temperature; also the temperature of the exact sampler')


def parse_args(args):
    parser = argparse.ArgumentParser(description="Statistical qubit freezing for Ising and QUBO problems")
    common = _common_parser()
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    generate = commands.add_parser('generate', parents=[common], help='Generate a random problem')
    generate.add_argument('kind', choices=('ising', 'nae3sat'))
    generate.add_argument('--n', type=int, required=True, help='Number of variables')
    generate.add_argument('--rho', type=float, default=DEFAULT_RHO, help='Clause-to-variable ratio')
    generate.add_argument('--plant', action='store_true', help='Plant a satisfying assignment')
    generate.add_argument('-o', '--output', default='problem.json')

    solve = commands.add_parser('solve', parents=[common], help='Sample a problem without freezing')
    solve.add_argument('problem')
    _add_sampler_arguments(solve)
    solve.add_argument('--repeats', type=int, default=None,
                       help='Sample the problem this many times and write a baseline report')

    run = commands.add_parser('sqf', parents=[common], help='Run statistical qubit freezing')
    run.add_argument('problem')
    _add_sampler_arguments(run)
    run.add_argument('--threshold', type=float, default=0.6)
    run.add_argument('--strategy', type=strategy, choices=STRATEGIES, default=STRATEGIES[0])
    run.add_argument('--increment', type=float, default=0.05, help='Threshold increment (progressive)')
    run.add_argument('--every', type=int, default=3, help='Iterations between increments (progressive)')
    run.add_argument('--m-limit', type=int, default=5, help='Freezes per iteration (first_m)')
    run.add_argument('--max-iterations', type=int, default=64)
    run.add_argument('--keep-samples', action='store_true', help='Also write every sample set')

    spectrum = commands.add_parser('spectrum', parents=[common], help='Instantaneous spectra and gaps')
    spectrum.add_argument('problem', nargs='?', default=None)
    spectrum.add_argument('--schedule', default=None, help='CSV with columns s, A_GHz, B_GHz')
    spectrum.add_argument('--grid', type=int, default=DEFAULT_GRID_POINTS, help='Number of s points')
    spectrum.add_argument('--k', type=int, default=2, help='Number of levels')
    spectrum.add_argument('--freeze-discriminating', action='store_true',
                          help='Also sweep the model with its discriminating qubit frozen')
    spectrum.add_argument('--scaling', type=int_list, default=None,
                          help='Minimum gap of random instances of these sizes')
    spectrum.add_argument('--widening', type=int, default=None,
                          help='Gap widening over random instances of this size')
    spectrum.add_argument('--seeds', type=int_list, default=[0], help='Seeds of --scaling and --widening')

    convert = commands.add_parser('convert', parents=[common], help='Convert between Ising and QUBO')
    convert.add_argument('problem')
    convert.add_argument('output')
    convert.add_argument('--to', choices=('ising', 'qubo'), required=True)

    replay = commands.add_parser('replay', parents=[common], help='Re-execute the command of a manifest')
    replay.add_argument('manifest')

    return parser.parse_args(args)


def run_command(args, argv):
    out_dir = args.out_dir if args.out_dir is not None else '.'
    os.makedirs(out_dir, exist_ok=True)
    workspace = Workspace(out_dir)
    config, seeds, inputs = COMMANDS[args.command](args, workspace)
    manifest = RunManifest(args.command, argv, config, seeds, inputs, workspace.outputs)
    workspace.write(MANIFEST, dumps(manifest.as_dict()))
    return workspace.outputs


def replay(args):
    manifest = RunManifest.from_dict(loads(read_text(args.manifest)))
    if manifest.version != sqf.__version__:
        logger.warning('Manifest was written by version %s (running %s)', manifest.version, sqf.__version__)
    argv = manifest.argv
    if args.out_dir is not None:
        argv = argv + ['--out-dir', args.out_dir]
    replayed = parse_args(argv)
    if replayed.command == 'replay':
        raise ValidationError('A manifest cannot replay another manifest')
    return run_command(replayed, argv)


def _error_line(e):
    if isinstance(e, SQFError):
        return json.dumps(e.as_dict())
    return json.dumps({'error': e.__class__.__name__, 'message': str(e), 'position': None})


def entry_point(args):
    args = list(args)
    parsed = parse_args(args)
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if parsed.verbose else logging.WARNING,
                        format='%(levelname)s:%(name)s:%(message)s', force=True)
    try:
        if parsed.command == 'replay':
            replay(parsed)
        else:
            run_command(parsed, args)
    except (SQFError, OSError) as e:
        sys.stderr.write(_error_line(e) + '\n')
        return 1
    return 0


def main():
    sys.exit(entry_point(sys.argv[1:]))


if __name__ == "__main__":
    main()
