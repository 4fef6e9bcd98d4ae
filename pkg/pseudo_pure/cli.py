"""Command-line entry point.

    python -m pseudo_pure <command> [options]

Exit codes: 0 success, 1 input or usage error, 2 no solution, 3 failed
precondition. Errors are written to standard error as one line of JSON
{"code", "context", "message"}.
"""
import logging
import os
import sys
from typing import List, Optional, TextIO

import django
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError

from pseudo_pure.errors import InputError, PulseSimError, UsageError
from pseudo_pure.serialization import canonical_dumps

logger = logging.getLogger(__name__)

COMMANDS = ("solve", "prepare", "run", "spectrum", "tomo", "plot", "hogg", "presets")

USAGE = "usage: pseudo_pure {%s} [options]\n" % ",".join(COMMANDS)


def _report(error: PulseSimError, stderr: TextIO) -> int:
    if settings.DEBUG:
        logger.error(error.message, exc_info=error)
    stderr.write(canonical_dumps(error.as_record()) + "\n")
    return error.exit_code


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "ppsim.settings")
    django.setup()

    if not argv or argv[0] in ("-h", "--help"):
        (stdout if argv else stderr).write(USAGE)
        return 0 if argv else 1
    command, *rest = argv
    if command not in COMMANDS:
        return _report(InputError(f"unknown command {command!r}", known=list(COMMANDS)), stderr)

    try:
        call_command(command, *rest, stdout=stdout, stderr=stderr)
    except PulseSimError as e:
        return _report(e, stderr)
    except CommandError as e:
        return _report(UsageError(str(e), command=command), stderr)
    except SystemExit as e:
        # argparse exits after --help
        return e.code or 0
    return 0
