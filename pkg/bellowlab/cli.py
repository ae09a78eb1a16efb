"""``bellowlab <subcommand>``: the toolkit's management commands without manage.py.

Exit status is 0 on success, 2 for invalid input or usage and 1 for
anything unexpected.
"""
import logging
import os
import sys

COMMANDS = ('enumerate', 'downselect', 'simulate', 'metrics', 'stats', 'report', 'pattern', 'calibrate')
USAGE = 'usage: bellowlab {' + ','.join(COMMANDS) + '} [options]\n'

logger = logging.getLogger('bellowlab')


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ('-h', '--help'):
        stream = sys.stdout if argv else sys.stderr
        stream.write(USAGE)
        return 0 if argv else 2
    name, rest = argv[0], argv[1:]
    if name not in COMMANDS:
        sys.stderr.write(USAGE + f"bellowlab: error: unknown subcommand {name!r}\n")
        return 2

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'bellowlab.settings')
    import django
    from django.core.management import load_command_class

    django.setup()
    command = load_command_class('actuators', name)
    try:
        command.run_from_argv(['bellowlab', name, *rest])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    except Exception:
        logger.exception("bellowlab %s failed", name)
        return 1
    return 0
