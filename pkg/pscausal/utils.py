# -*- coding: utf-8 -*-
"""
    Utils has nothing to do with the statistics.
"""

import os
import logging

from concurrent.futures import ProcessPoolExecutor

import numpy as np
import psutil

log = logging.getLogger(__name__)

# Instance folder path, make it independent.
INSTANCE_FOLDER_PATH = os.environ.get('PSCAUSAL_HOME', os.path.join(os.path.expanduser('~'), '.pscausal'))

OUTPUT_DIR_ENVVAR = 'PSCAUSAL_OUTPUT_DIR'
CONFIG_ENVVAR = 'PSCAUSAL_CONFIG'


def make_dir(dir_path):
    if not os.path.exists(dir_path):
        os.makedirs(dir_path)


def default_output_dir():
    return os.environ.get(OUTPUT_DIR_ENVVAR) or os.path.join(os.getcwd(), 'output')


def default_workers():
    count = psutil.cpu_count(logical=True)
    return count if count else 1


def make_rng(seed, *key):
    """
    Independent generator for one (seed, key) stream.

    Streams are derived with ``SeedSequence(entropy=seed, spawn_key=key)`` so
    that replicate ``(cell, rep)`` or chain ``c`` always sees the same numbers,
    whichever worker runs it and in whichever order.
    """
    spawn_key = tuple(int(k) for k in key)
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key))


def child_seed(seed, *key):
    """Integer seed for a sub-task, derived from the same splitting scheme."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def parallel_map(func, items, workers=1):
    """
    Map ``func`` over ``items`` and return results in item order.

    Runs in-process when ``workers <= 1`` or there is a single item, otherwise
    on a process pool capped at ``workers``.
    """
    items = list(items)
    if workers is None:
        workers = default_workers()

    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    workers = min(int(workers), len(items))
    log.debug('Dispatching {0} tasks to {1} worker processes.'.format(len(items), workers))

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
