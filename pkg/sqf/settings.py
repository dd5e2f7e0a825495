import os

from sqf.exceptions import ValidationError

THREADS_ENV = 'SQF_THREADS'

# guards on exhaustive work
MAX_ENUMERATION_VARS = 25
MAX_SPECTRUM_VARS = 14


def max_workers():
    """
    Upper bound on worker threads, from the environment variable SQF_THREADS.
    """
    value = os.environ.get(THREADS_ENV)
    if value is None or value.strip() == '':
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError:
        raise ValidationError('%s must be a positive integer (is "%s")' % (THREADS_ENV, value))
    if workers < 1:
        raise ValidationError('%s must be a positive integer (is "%s")' % (THREADS_ENV, value))
    return workers
