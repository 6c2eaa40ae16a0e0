import os
import shutil
import tempfile
import unittest

from configparser import ConfigParser

from pyhugeobject import settings


class BaseSettingsTestCase(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.path = os.path.join(self.directory, settings.CONFIG_FILE)

    def tearDown(self):
        shutil.rmtree(self.directory)


class TestSettings(BaseSettingsTestCase):

    def test_parse_configs(self):
        config = ConfigParser()
        config.optionxform = str
        config.read_string('[Defaults]\nC_T1 = 1.5\nMAX_ATTEMPTS = 7\n')
        self.assertEqual(settings.parse_configs(config),
                         {'C_T1': 1.5, 'MAX_ATTEMPTS': 7})

    def test_parse_configs_without_section(self):
        self.assertEqual(settings.parse_configs(ConfigParser()), {})

    def test_parse_environment(self):
        values = settings.parse_environment({'PYHUGEOBJECT_C_SE': '2.5',
                                             'UNRELATED': 'x'})
        self.assertEqual(values, {'C_SE': 2.5})

    def test_load_prefers_the_file(self):
        with open(self.path, 'w') as handle:
            handle.write('[Defaults]\nLOG_LEVEL = DEBUG\n')
        resolved = settings.load(self.path, {'PYHUGEOBJECT_LOG_LEVEL': 'INFO'})
        self.assertEqual(resolved['LOG_LEVEL'], 'DEBUG')
        self.assertEqual(resolved['C_R'], settings.BUILTIN_DEFAULTS['C_R'])

    def test_load_from_environment(self):
        resolved = settings.load(self.path, {'PYHUGEOBJECT_C_FP': '3'})
        self.assertEqual(resolved['C_FP'], 3.0)
        self.assertEqual(resolved['MAX_ATTEMPTS'],
                         settings.BUILTIN_DEFAULTS['MAX_ATTEMPTS'])
