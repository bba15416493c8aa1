# -*- coding: utf-8 -*-
"""
Library for Logger, ParsetParser and progressbar
"""
import os, logging, sys, time
from configparser import ConfigParser
from io import StringIO

logger = logging.getLogger('CrossCap')


class ParsetError(ValueError):
    """A parset value is missing or cannot be interpreted."""


class ParsetParser(ConfigParser):
    """
    A parser for crosscap parset files.

    Pipeline parsets and the proof scripts under ``data/proofs`` share this
    format: a global header followed by one section per step. Keys before
    the first section land in ``[_global]``.

    Parameters
    ----------
    parsetFile : str
        Name of the parset file.
    """

    def __init__(self, parsetFile):
        # '%' is an operator in index expressions and ';' may appear in anchors
        ConfigParser.__init__(self, inline_comment_prefixes=('#',), interpolation=None)
        self.optionxform = str  # named words are case sensitive

        self.filename = str(parsetFile)
        with open(parsetFile) as f:
            self.read_file(StringIO('[_global]\n' + f.read()), source=self.filename)

    def _fail(self, msg):
        logger.error(msg)
        raise ParsetError('%s: %s' % (self.filename, msg))

    def steps(self):
        """Sections in file order, without the global and private ones."""
        return [s for s in self.sections() if not s.startswith('_')]

    def checkSpelling(self, s, availValues=[]):
        """
        Warn about keys of section ``s`` that nothing reads.

        Returns
        -------
        list of str
            The unknown keys.
        """
        known = {x.lower() for x in ['operation'] + list(availValues)}
        unknown = [k for k in self.options(s) if k.lower() not in known]
        for k in unknown:
            logger.warning('Section %s: unknown option %s - ignoring.' % (s, k))
        return unknown

    def _value(self, s, v, default, convert, expected):
        if not self.has_option(s, v):
            if default is None:
                self._fail('Section: %s - Values: %s: required (expected %s).' % (s, v, expected))
            return default
        try:
            return convert(self.get(s, v))
        except ValueError:
            self._fail('Section: %s - Values: %s: expected %s.' % (s, v, expected))

    def getstr(self, s, v, default=None):
        return self._value(s, v, default, lambda x: x.replace('\'', '').replace('"', ''), 'string')

    def getbool(self, s, v, default=None):
        def convert(x):
            if x.strip().lower() not in self.BOOLEAN_STATES:
                raise ValueError(x)
            return self.BOOLEAN_STATES[x.strip().lower()]
        return self._value(s, v, default, convert, 'bool')

    def getint(self, s, v, default=None):
        return self._value(s, v, default, int, 'int')

    def getarray(self, s, v, default=None):
        """Comma separated values, brackets and spaces dropped."""
        def convert(x):
            x = x.replace('\'', '').replace('"', '')
            return [y for y in x.replace(' ', '').strip('[]').split(',') if y]
        return self._value(s, v, default, convert, 'array')

    def getarrayint(self, s, v, default=None):
        return self._value(s, v, default, lambda x: [int(y) for y in self.getarray(s, v)],
                           'array of int')

    def getwords(self, s, v, default=None):
        """
        Comma separated list of words. Unlike `getarray`, inner spaces are
        kept: they separate the letters of a word.
        """
        return self._value(s, v, default,
                           lambda x: [w.strip() for w in self.getstr(s, v).split(',') if w.strip()],
                           'words')


class Logger():
    """
    Configure the package logger.

    Parameters
    ----------
    logfile : str, optional
        If given, everything down to DEBUG also goes to this file. An existing
        file is moved aside first.
    level : int, optional
        Console level.
    """
    fmt = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s', '%Y-%m-%d %H:%M:%S')

    def __init__(self, logfile=None, level=logging.INFO):
        # drop handlers from an earlier configuration
        logger.propagate = False
        logger.handlers = []
        logger.setLevel(logging.DEBUG if logfile else level)

        self.logfile = logfile
        # stdout is reserved for reports
        self._add(_ColorStreamHandler(sys.stderr), level)
        if logfile is not None:
            self.backup(logfile)
            self._add(logging.FileHandler(logfile), logging.DEBUG)

    def _add(self, handler, level):
        handler.setLevel(level)
        handler.setFormatter(self.fmt)
        logger.addHandler(handler)

    @staticmethod
    def backup(logfile):
        if os.path.exists(logfile):
            os.replace(logfile, time.strftime(logfile + '_bkp_%Y-%m-%d_%H:%M:%S'))


class _ColorStreamHandler(logging.StreamHandler):
    """Level-coloured console output when the stream is a terminal."""

    RESET = '\x1b[0m'
    COLORS = ((logging.ERROR, '\x1b[31m'), (logging.WARNING, '\x1b[33m'),
              (logging.INFO, '\x1b[32m'), (logging.DEBUG, '\x1b[36m'))

    def format(self, record):
        text = logging.StreamHandler.format(self, record)
        if not getattr(self.stream, 'isatty', lambda: False)():
            return text
        color = next((c for lvl, c in self.COLORS if record.levelno >= lvl), self.RESET)
        return color + text + self.RESET


def progress(count, total, status=''):
    """
    One-line progress bar on stderr, redrawn in place. Call once per loop
    iteration; silent unless stderr is a terminal.
    """
    if total <= 0 or not sys.stderr.isatty():
        return
    width = 40
    done = round(width * count / total)
    sys.stderr.write('[%s%s] %5.1f%% ...%s\r' % ('=' * done, '-' * (width - done), 100. * count / total, status))
    sys.stderr.flush()
