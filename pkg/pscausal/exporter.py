# -*- coding: utf-8 -*-

import os
import math
import logging

from collections import OrderedDict

import jsonpickle
import numpy as np
import pandas as pd

from jsonpickle.backend import JSONBackend

from .errors import OutputExistsError, ValidationError
from .utils import make_dir

log = logging.getLogger(__name__)

_backend = JSONBackend()
_backend.set_encoder_options('json', sort_keys=True)


def _plain(value):
    """Nested numpy / pandas values as JSON-ready builtins; NaN becomes null."""
    if isinstance(value, (dict, OrderedDict)):
        return dict((str(k), _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [_plain(v) for v in items]
    if isinstance(value, pd.DataFrame):
        return [_plain(row) for row in value.to_dict('records')]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if hasattr(value, 'as_dict'):
        return _plain(value.as_dict())
    return value


def to_json(payload):
    return jsonpickle.encode(_plain(payload), unpicklable=False, make_refs=False, backend=_backend, indent=4,
                             separators=(',', ': '))


class Exporter(object):
    """
    Writes the tables and reports of one run into ``output_dir``.

    Existing files are never replaced unless ``overwrite`` is set; call
    :meth:`claim` with every planned file name before starting long work.
    """

    MANIFEST = 'manifest.json'

    def __init__(self, output_dir, overwrite=False):
        if not output_dir:
            raise ValidationError('an output directory is required')
        self.output_dir = output_dir
        self.overwrite = bool(overwrite)
        self.written = []

    def __repr__(self):
        return '<Exporter {0} overwrite={1}>'.format(self.output_dir, self.overwrite)

    def path(self, filename):
        return os.path.join(self.output_dir, filename)

    def claim(self, *filenames):
        if self.overwrite:
            return
        existing = [name for name in filenames if os.path.exists(self.path(name))]
        if existing:
            raise OutputExistsError('{0} already exists in {1}; pass --overwrite to replace'.format(
                ', '.join(existing), self.output_dir))

    def _write(self, filename, text):
        self.claim(filename)
        make_dir(self.output_dir)

        full_path = self.path(filename)
        with open(full_path, 'w', newline='\n') as out:
            out.write(text)

        self.written.append(full_path)
        log.info('Wrote {0}'.format(full_path))
        return full_path

    def write_csv(self, filename, frame):
        return self._write(filename, frame.to_csv(index=False, lineterminator='\n'))

    def write_json(self, filename, payload):
        return self._write(filename, to_json(payload) + '\n')

    def write_manifest(self, command, config, seed, version, schema_version):
        """Everything needed to rerun ``command`` and get the same bytes back."""
        return self.write_json(self.MANIFEST, {
            'schema_version': schema_version,
            'version': version,
            'command': command,
            'config': config,
            'seed': seed,
        })
