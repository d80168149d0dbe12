from django.core.management.base import BaseCommand, CommandError

from frechet.core import atom_label, atoms, format_rational
from frechet.polytope import closed_form_extremals
from frechet.services import ExtremalService, VERIFY_MAX_DENOMINATOR

from ._common import EXIT_SEMANTIC, EXIT_USAGE, parse_param_arg, parse_rational_arg


class Command(BaseCommand):
    help = 'Cross-check the closed-form extremal pmfs of F_3(p) against vertex enumeration'

    def add_arguments(self, parser):
        parser.add_argument('--p', nargs='*', default=None,
                            help="Grid of 'num/den' values; defaults to every s/t <= 1/2 with t <= --max-denominator")
        parser.add_argument('--max-denominator', type=int, default=VERIFY_MAX_DENOMINATOR)
        parser.add_argument('--perturb', default=None, metavar='LABEL:INDEX:DELTA',
                            help='Negative control: add DELTA to entry INDEX of column LABEL before comparing')

    def _parse_perturb(self, text):
        try:
            label, index, delta = text.split(':')
            index = int(index)
        except ValueError:
            raise CommandError(f"--perturb expects LABEL:INDEX:DELTA, got '{text}'", returncode=EXIT_USAGE)
        if not 0 <= index < 8:
            raise CommandError(f'--perturb index must be in 0..7, got {index}', returncode=EXIT_USAGE)
        return label, index, parse_rational_arg(delta)

    def handle(self, *args, **options):
        if options['p']:
            grid = [parse_param_arg(text) for text in options['p']]
        else:
            if options['max_denominator'] < 2:
                raise CommandError('--max-denominator must be at least 2', returncode=EXIT_USAGE)
            grid = ExtremalService.default_grid(options['max_denominator'])
        perturb = self._parse_perturb(options['perturb']) if options['perturb'] else None

        failed = 0
        for p in grid:
            applied = perturb if perturb and perturb[0] in closed_form_extremals(p).labels else None
            result = ExtremalService.verify_parameter(p, perturb=applied)
            if result.passed:
                self.stdout.write(self.style.SUCCESS(
                    f'PASS p={format_rational(result.p)} count={result.oracle_count}'
                ))
                continue
            failed += 1
            self.stdout.write(self.style.ERROR(
                f'FAIL p={format_rational(result.p)} count={result.oracle_count} expected={result.expected_count}'
            ))
            for failure in result.failures:
                self.stdout.write(f'  {failure}')
            for values in result.missing:
                self.stdout.write(f'  - oracle only: {self._describe(values)}')
            for values in result.extra:
                self.stdout.write(f'  + closed form only: {self._describe(values)}')

        self.stdout.write(f'{len(grid) - failed}/{len(grid)} parameters passed')
        if failed:
            raise CommandError(f'{failed} parameter(s) failed verification', returncode=EXIT_SEMANTIC)

    @staticmethod
    def _describe(values):
        return ', '.join(
            f'{atom_label(x)}={format_rational(v)}' for x, v in zip(atoms(3), values) if v != 0
        )
