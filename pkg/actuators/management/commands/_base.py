import argparse
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from actuators.exceptions import BellowLabError, DomainError
from actuators.ingest import default_displacement_table, load_displacement_table, load_pneumatic_config
from actuators.models import parse_variant

logger = logging.getLogger('actuators.commands')


def variant_arg(text):
    try:
        return parse_variant(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


class BellowLabCommand(BaseCommand):
    """Base for every subcommand: domain failures exit with status 2."""

    requires_system_checks = []

    def add_out_argument(self, parser):
        parser.add_argument('--out', default=None, help='Output directory (default: $BELLOWLAB_OUT)')

    def add_table_arguments(self, parser):
        parser.add_argument('--displacement', default=None, help='Per-cell displacement CSV')
        parser.add_argument('--pneumatics', default=None, help='Pneumatic config INI')

    def out_dir(self, options):
        path = Path(options.get('out') or settings.BELLOWLAB_OUT)
        path.mkdir(parents=True, exist_ok=True)
        return path

    def displacement_table(self, options):
        path = options.get('displacement')
        return load_displacement_table(path) if path else default_displacement_table()

    def pneumatic_config(self, options):
        return load_pneumatic_config(options.get('pneumatics'))

    def emit(self, line=''):
        self.stdout.write(line)

    def handle(self, *args, **options):
        try:
            self.run(*args, **options)
        except BellowLabError as exc:
            raise CommandError(str(exc), returncode=2) from exc

    def run(self, *args, **options):
        raise NotImplementedError
