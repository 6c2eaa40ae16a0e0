import csv
import json
import os
import shutil
import tempfile
import unittest

from pyhugeobject import error, report, settings


class BaseReportTestCase(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.record = report.ResultRecord(
            'learn',
            {'command': 'learn', 'master_seed': 3, 'trials': 2},
            [
                {'trial': 0, 'outcome': 'Learned', 'weights': [0.5, 0.5]},
                {'trial': 1, 'outcome': 'Fail', 'weights': [0.25, 0.75]},
            ],
            summary={'success_rate': 0.5},
            wall_clock=1.25
        )

    def tearDown(self):
        shutil.rmtree(self.directory)


class TestResultRecord(BaseReportTestCase):

    def test_to_dict(self):
        data = self.record.to_dict()
        self.assertEqual(data['version'], settings.VERSION)
        self.assertEqual(data['summary'], {'success_rate': 0.5})
        self.assertNotIn('wall_clock_seconds', data)
        self.assertNotIn('descriptors', data)
        self.assertEqual(
            self.record.to_dict(include_timing=True)['wall_clock_seconds'],
            1.25)

    def test_json_is_canonical(self):
        text = self.record.to_json()
        self.assertEqual(text, json.dumps(json.loads(text), sort_keys=True,
                                          indent=2))

    def test_write_and_read_json(self):
        path = os.path.join(self.directory, 'result.json')
        self.record.write_json(path)
        with open(path) as handle:
            restored = report.ResultRecord.from_json(handle.read())
        self.assertEqual(restored.to_dict(), self.record.to_dict())

    def test_from_bad_json(self):
        with self.assertRaises(error.HugeObjectConfigError):
            report.ResultRecord.from_json('not json')

    def test_csv(self):
        path = os.path.join(self.directory, 'result.csv')
        self.record.write_csv(path)
        with open(path, newline='') as handle:
            rows = list(csv.DictReader(handle))
        self.assertEqual(len(rows), 2)
        self.assertEqual(sorted(rows[0]), ['outcome', 'trial', 'weights'])
        self.assertEqual(json.loads(rows[1]['weights']), [0.25, 0.75])
