"""
Machine-readable experiment results.

A :py:class:`ResultRecord` is written as JSON (canonical) and optionally
as a flat CSV with one row per trial.
"""
import csv
import json
import logging

from . import error, settings

logger = logging.getLogger(__name__)


class ResultRecord(object):
    """
    The outcome of one experiment run.

    Public Attributes:
        - ``command`` (the subcommand)
        - ``config`` (the validated configuration, seeds included)
        - ``trials`` (one dict per trial, in trial order)
        - ``summary`` (aggregates over the trials)
        - ``descriptors`` (code and geometry descriptors, if any)
        - ``wall_clock`` (seconds; excluded from output unless asked for)
        - ``version``

    Public Methods:
        - :py:meth:`to_dict`
        - :py:meth:`to_json`
        - :py:meth:`write_json`
        - :py:meth:`write_csv`

    Example Usage:

        .. code-block:: python

            In [1]: record = ResultRecord('emd', {'master_seed': 0},
               ...:                       [{'trial': 0, 'value': 0.5}])

            In [2]: record.to_dict()['summary']
            Out[2]: {}

    """

    def __init__(self, command, config, trials, summary=None,
                 descriptors=None, wall_clock=None):
        self.command = command
        self.config = dict(config)
        self.trials = list(trials)
        self.summary = dict(summary or {})
        self.descriptors = descriptors
        self.wall_clock = wall_clock
        self.version = settings.VERSION

    def to_dict(self, include_timing=False):
        record = {
            'command': self.command,
            'version': self.version,
            'config': self.config,
            'trials': self.trials,
            'summary': self.summary,
        }
        if self.descriptors is not None:
            record['descriptors'] = self.descriptors
        if include_timing:
            record['wall_clock_seconds'] = self.wall_clock
        return record

    def to_json(self, include_timing=False):
        return json.dumps(self.to_dict(include_timing), sort_keys=True,
                          indent=2)

    def write_json(self, path, include_timing=False):
        with open(path, 'w') as handle:
            handle.write(self.to_json(include_timing))
            handle.write('\n')
        logger.debug('wrote %s', path)

    def csv_rows(self):
        """
        One flat dict per trial; nested values are JSON-encoded.
        """
        rows = []
        for trial in self.trials:
            row = {}
            for key, value in trial.items():
                if isinstance(value, (dict, list, tuple)):
                    value = json.dumps(value, sort_keys=True)
                row[key] = value
            rows.append(row)
        return rows

    def write_csv(self, path):
        rows = self.csv_rows()
        fields = sorted({key for row in rows for key in row})
        with open(path, 'w', newline='') as handle:
            writer = csv.DictWriter(handle, fieldnames=fields)
            writer.writeheader()
            writer.writerows(rows)
        logger.debug('wrote %s', path)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except ValueError:
            raise error.HugeObjectConfigError('Not a JSON result record.')
        record = cls(
            data['command'],
            data['config'],
            data['trials'],
            summary=data.get('summary'),
            descriptors=data.get('descriptors'),
            wall_clock=data.get('wall_clock_seconds')
        )
        record.version = data.get('version', record.version)
        return record

    def __repr__(self):
        return 'ResultRecord(command={c!r}, trials={t})'.format(
            c=self.command,
            t=len(self.trials)
        )
