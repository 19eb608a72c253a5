# -*- coding: utf-8 -*-

import os.path
from collections.abc import Iterable
from numbers import Number

import regex as re
import yaml

#################
# Config Layers #
#################

DEFAULT_PROFILE = 'default'

ConfigData = dict[str, dict[str, dict]]  # profile -> section -> params

def read_config_file(path: str) -> ConfigData:
    """Parse a YAML (or JSON) config file, checking the profile/section layout

    :raises RuntimeError: if the file cannot be read, does not parse, or does not
    map profiles to sections of parameters
    """
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise RuntimeError(f"Could not read config file '{path}': {e}") from e
    if not data or not isinstance(data, dict):
        raise RuntimeError(f"Config file '{path}' is empty or not a mapping")

    for profile, sections in data.items():
        if sections is not None and not isinstance(sections, dict):
            raise RuntimeError(f"Profile '{profile}' in '{path}' must map section names to parameters")
        for section, params in (sections or {}).items():
            if params is not None and not isinstance(params, dict):
                raise RuntimeError(f"Section '{profile}.{section}' in '{path}' must be a mapping")
    return data

class Config:
    """Layered configuration.  Files are merged in load order, a later file
    replacing earlier values parameter by parameter within a section (values
    themselves are never merged deeper).  A named profile is resolved on top of
    'default' each time a section is requested:

        default:
          trajectory:
            rate:     100.0
            duration: 1.2
        slow:
          trajectory:
            rate:     50.0    # 'slow' keeps duration 1.2
    """
    config_dir: str | None
    filepaths:  list[str]   # resolved, in load order
    data:       ConfigData

    def __init__(self, files: str | Iterable[str], config_dir: str = None):
        """`files` may also be a single comma-separated string (no spaces)
        """
        if isinstance(files, str):
            files = files.split(',')
        elif not isinstance(files, Iterable):
            raise RuntimeError(f"Config files must be a string or iterable, got {type(files).__name__}")

        self.config_dir = config_dir
        self.filepaths = []
        self.data = {}
        for file in files:
            self.load(file)

    @property
    def profiles(self) -> list[str]:
        return list(self.data)

    def resolve_path(self, file: str) -> str:
        """Absolute names are kept, relative ones are taken from `config_dir` (if set)
        """
        if os.path.isabs(file) or not self.config_dir:
            return os.path.realpath(file)
        return os.path.realpath(os.path.join(self.config_dir, file))

    def load(self, file: str) -> bool:
        """Merge a config file into the loaded layers; returns False (and does
        nothing) for a file that is already loaded

        :raises RuntimeError: if the file cannot be read or is malformed
        """
        path = self.resolve_path(file)
        if path in self.filepaths:
            return False

        for profile, sections in read_config_file(path).items():
            layer = self.data.setdefault(profile, {})
            for section, params in (sections or {}).items():
                layer.setdefault(section, {}).update(params or {})
        self.filepaths.append(path)
        return True

    def config(self, section: str, profile: str = None) -> dict:
        """Parameters of `section` for `profile` (just 'default' if not given), as a
        fresh dict; empty if no loaded file has the section

        :raises RuntimeError: if 'default' or the requested profile was never loaded
        """
        if DEFAULT_PROFILE not in self.data:
            raise RuntimeError(f"No '{DEFAULT_PROFILE}' profile in {self.filepaths}")
        params = dict(self.data[DEFAULT_PROFILE].get(section) or {})
        if profile and profile != DEFAULT_PROFILE:
            if profile not in self.data:
                raise RuntimeError(f"Unknown config profile '{profile}' (loaded: {', '.join(self.profiles)})")
            params.update(self.data[profile].get(section) or {})
        return params

##################
# Token Handling #
##################

ASSIGN_PAT = re.compile(r'(\p{L}[\p{L}\d_]*)=(.*)')

def typecast(val: str) -> str | Number | bool | None:
    """Cast a string token to the most plausible type (int, float, bool, None,
    or the original string)
    """
    if re.fullmatch(r'[-+]?\d+', val):
        return int(val)
    try:
        return float(val)
    except ValueError:
        pass
    if val.lower() in ['false', 'f', 'no', 'n']:
        return False
    if val.lower() in ['true', 't', 'yes', 'y']:
        return True
    if val.lower() in ['null', 'none', 'nil']:
        return None
    return val if len(val) > 0 else None

def parse_assignments(tokens: Iterable[str]) -> dict[str, str | Number | bool | None]:
    """Takes a list of "key=value" tokens (typically from the command line) and
    returns the corresponding dict, with values typecast.  Tokens may also be
    comma-joined within a single argument (e.g. "a=1,b=2").

    :raises ValueError: if a token is not a well-formed assignment
    """
    ret = {}
    for token in tokens:
        for part in token.split(','):
            if not part:
                continue
            m = ASSIGN_PAT.fullmatch(part.strip())
            if not m:
                raise ValueError(f"Bad assignment '{part}' (expected key=value)")
            ret[m.group(1)] = typecast(m.group(2))
    return ret
