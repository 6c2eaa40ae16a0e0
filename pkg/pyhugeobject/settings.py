"""
Default constants for the algorithms, resolved once at import time.

Values are read from ``~/.pyhugeobject.ini`` (section ``[Defaults]``) when
that file exists, otherwise from ``PYHUGEOBJECT_<NAME>`` environment
variables, otherwise the built-in defaults below apply.
"""
import os

from configparser import ConfigParser

HOME_DIR = os.path.expanduser('~')
CONFIG_FILE = '.pyhugeobject.ini'
PATH = os.path.join(HOME_DIR, CONFIG_FILE)
SECTION = 'Defaults'
ENV_PREFIX = 'PYHUGEOBJECT_'

BUILTIN_DEFAULTS = {
    # cluster learner size multipliers
    'C_T1': 3.0,
    'C_T2': 1.0,
    'C_R': 1.0,
    # permutation recovery, adaptive gap tester and support estimator
    'C_FP': 2.0,
    'C_AA': 4.0,
    'C_AB': 2.0,
    'C_SE': 4.0,
    'C_SI': 8.0,
    # palindrome tester loop multiplier
    'C_PAL': 4.0,
    'MAX_ATTEMPTS': 200,
    'LOG_LEVEL': 'WARNING',
}


def parse_configs(config_object, defaults=BUILTIN_DEFAULTS):
    """
    A helper function to read every known key from a parsed ini file,
    coercing each to the type of its built-in default.
    """
    values = {}
    if not config_object.has_section(SECTION):
        return values
    for name, default in defaults.items():
        if config_object.has_option(SECTION, name):
            values[name] = type(default)(config_object.get(SECTION, name))
    return values


def parse_environment(environ, defaults=BUILTIN_DEFAULTS):
    """
    A helper function to read ``PYHUGEOBJECT_<NAME>`` overrides.
    """
    values = {}
    for name, default in defaults.items():
        raw = environ.get(ENV_PREFIX + name)
        if raw is not None:
            values[name] = type(default)(raw)
    return values


def load(path=PATH, environ=os.environ):
    """
    Resolve the effective defaults: ini file first, then environment.
    """
    resolved = dict(BUILTIN_DEFAULTS)
    if os.path.isfile(path):
        config = ConfigParser()
        config.optionxform = str
        config.read(path)
        resolved.update(parse_configs(config))
    else:
        resolved.update(parse_environment(environ))
    return resolved


_resolved = load()

C_T1 = _resolved['C_T1']
C_T2 = _resolved['C_T2']
C_R = _resolved['C_R']
C_FP = _resolved['C_FP']
C_AA = _resolved['C_AA']
C_AB = _resolved['C_AB']
C_SE = _resolved['C_SE']
C_SI = _resolved['C_SI']
C_PAL = _resolved['C_PAL']
MAX_ATTEMPTS = _resolved['MAX_ATTEMPTS']
LOG_LEVEL = _resolved['LOG_LEVEL']

VERSION = '0.1.0'
