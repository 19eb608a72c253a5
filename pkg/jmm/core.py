# -*- coding: utf-8 -*-

from os import environ
import os.path
import logging
import logging.handlers

from . import utils

######################
# Config/Environment #
######################

FILE_DIR     = os.path.dirname(os.path.realpath(__file__))
BASE_DIR     = os.path.realpath(os.path.join(FILE_DIR, os.pardir))

CONFIG_DIR   = 'config'
DFLT_CONFIG  = ['config.yml']
CONFIG_FILES = environ.get('JMM_CONFIG_FILES') or DFLT_CONFIG
cfg          = utils.Config(CONFIG_FILES, os.path.join(BASE_DIR, CONFIG_DIR))

DEBUG        = int(environ.get('JMM_DEBUG') or 0)

def ConfigFile(file_name: str, dir: str = CONFIG_DIR) -> str:
    """Given name of file, return full path name (in CONFIG_DIR, or specified
    directory relative to the project base)
    """
    return os.path.join(BASE_DIR, dir, file_name)

###########
# Logging #
###########

LOG_CONFIG   = cfg.config('logging')
LOGGER_NAME  = environ.get('JMM_LOG_NAME') or 'jmm'
LOG_DIR      = LOG_CONFIG.get('log_dir') or 'log'
LOG_PATH     = os.path.join(BASE_DIR, LOG_DIR, LOGGER_NAME + '.log')
LOG_FMTR     = logging.Formatter('%(asctime)s %(levelname)s [%(filename)s:%(lineno)s]: %(message)s')
LOG_FILE_MAX = LOG_CONFIG.get('file_max') or 25000000
LOG_FILE_NUM = LOG_CONFIG.get('file_num') or 50

log = logging.getLogger(LOGGER_NAME)

def _file_handler() -> logging.Handler | None:
    """Rotating log file under the project base, or None if the log directory
    cannot be created (e.g. read-only install)
    """
    try:
        os.makedirs(os.path.dirname(LOG_PATH), exist_ok=True)
        hand = logging.handlers.RotatingFileHandler(LOG_PATH, 'a', LOG_FILE_MAX, LOG_FILE_NUM)
    except OSError:
        return None
    hand.setLevel(logging.DEBUG)
    hand.setFormatter(LOG_FMTR)
    return hand

stderr_hand = logging.StreamHandler()
stderr_hand.setLevel(logging.DEBUG)
stderr_hand.setFormatter(LOG_FMTR)

def set_debug(level: int) -> None:
    """0: INFO and above, log file only; 1: DEBUG; 2: DEBUG, echoed to stderr
    """
    log.setLevel(logging.DEBUG if level > 0 else logging.INFO)
    if level > 1:
        if stderr_hand not in log.handlers:
            log.addHandler(stderr_hand)
    else:
        log.removeHandler(stderr_hand)

if file_hand := _file_handler():
    log.addHandler(file_hand)
set_debug(DEBUG)

##############
# Exceptions #
##############

class ConfigError(RuntimeError):
    """Thrown if there is a problem with a config file entry, or combination
    of entries (including robot definition files)
    """
    pass

class ValidationError(RuntimeError):
    """Thrown if caller-supplied arguments or input files fail validation,
    before any real computation is attempted
    """
    pass

class DataError(RuntimeError):
    """Thrown if there is a problem detected with any of the data at runtime,
    whether due to degenerate input geometry or insufficient signal
    """
    pass

class DomainError(DataError):
    """Thrown if a profile function is evaluated outside of its normalized
    interval (or the corresponding time interval)
    """
    pass

class NumericError(RuntimeError):
    """Thrown if a linear-algebra step of a fit cannot be completed (singular
    or rank-deficient system)
    """
    pass

class LogicError(RuntimeError):
    """Basically the same as an assert, but with a `raise` interface
    """
    pass
