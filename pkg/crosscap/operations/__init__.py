"""
Pipeline operations. Every module defines ``_run_parser(surface, parser,
step, report)`` for parset steps and ``run(surface, report, ...)`` for the
command line; the parset name of an operation is its module name in capitals.
"""
import os, time, glob, logging

__all__ = [os.path.basename(f)[:-3] for f in glob.glob(os.path.dirname(__file__) + "/*.py")
           if os.path.basename(f)[0] != '_']

for x in __all__:
    __import__(x, locals(), globals(), level=1)

# parset name -> report command
COMMANDS = {x.upper(): x.replace('_', '-') for x in __all__}


def by_name(name):
    """Operation module for a parset name such as ``DUMP_MODEL``."""
    if name not in COMMANDS:
        raise KeyError(name)
    return globals()[name.lower()]


class Timer(object):
    """
    Context manager timing one step of a run.

    Parameters
    ----------
    logger : logging.Logger, optional
        Root logging when omitted.
    step, operation : str
        Names used in the log lines.
    timing : dict, optional
        Receives ``step -> wall time in s`` on success.
    """

    def __init__(self, logger=None, step='undef.', operation='undef.', timing=None):
        self.logger = logging if logger is None else logger
        self.step = step
        self.operation = operation
        self.timing = timing

    def __enter__(self):
        self.logger.info("--> Starting '%s' step (operation: %s)." % (self.step, self.operation))
        self.start = time.time()
        self.startcpu = time.process_time()
        return self

    def __exit__(self, exit_type, value, tb):
        # failed steps are reported by the caller
        if exit_type is None:
            elapsed = time.time() - self.start
            if self.timing is not None:
                self.timing[self.step] = round(elapsed, 3)
            self.logger.info("Time for %s step: %.1f s (cpu: %.1f s)." % (
                self.step, elapsed, time.process_time() - self.startcpu))
