"""Exception hierarchy; each class maps to one CLI exit code."""


class TnnError(Exception):
    exit_code = 1


class ConfigError(TnnError):
    exit_code = 3


class ConfigNotFoundError(ConfigError):
    pass


class ConfigSchemaError(ConfigError):
    pass


class ConfigInvariantError(ConfigError):
    pass


class DimensionError(TnnError, ValueError):
    exit_code = 4


class OutputError(TnnError, OSError):
    exit_code = 5
