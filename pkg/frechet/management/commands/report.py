import json
import sys

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import ValidationError as PayloadError

from frechet.choices import OutputFormat
from frechet.exceptions import OutOfRange, UnequalMargins
from frechet.services import AllocationService, ReportService

from ._common import EXIT_IO, EXIT_RANGE, EXIT_SEMANTIC, EXIT_USAGE, error_text


class Command(BaseCommand):
    help = 'Membership, decomposition, dependence and Shapley report for a pmf or extremal-set JSON document'

    def add_arguments(self, parser):
        parser.add_argument('path', help="JSON document path, or '-' for stdin")
        parser.add_argument('--format', default=OutputFormat.JSON,
                            choices=[OutputFormat.JSON, OutputFormat.TABLE, OutputFormat.CSV])

    def _read(self, path):
        try:
            if path == '-':
                return json.load(sys.stdin)
            with open(path) as handle:
                return json.load(handle)
        except OSError as e:
            raise CommandError(f'Cannot read {path}: {e}', returncode=EXIT_IO)
        except json.JSONDecodeError as e:
            raise CommandError(f'{path} is not valid JSON: {e}', returncode=EXIT_USAGE)

    def handle(self, *args, **options):
        document = self._read(options['path'])
        try:
            pmfs = ReportService.load_document(document)
        except PayloadError as e:
            raise CommandError(f'Invalid document: {json.dumps(e.detail)}', returncode=EXIT_USAGE)

        reports = []
        for label, f in pmfs:
            try:
                reports.append(ReportService.build_report(f, label=label))
            except UnequalMargins as e:
                raise CommandError(f'{label}: {error_text(e)}', returncode=EXIT_SEMANTIC)
            except OutOfRange as e:
                raise CommandError(f'{label}: {error_text(e)}', returncode=EXIT_RANGE)

        if options['format'] == OutputFormat.TABLE:
            self._write_table(reports)
        elif options['format'] == OutputFormat.CSV:
            self._write_csv(reports)
        else:
            payload = reports[0] if 'vertices' not in document else reports
            self.stdout.write(json.dumps(payload, indent=2))

    def _write_csv(self, reports):
        missing = [report['label'] for report in reports if 'shapley' not in report]
        if missing:
            raise CommandError(
                f'CSV allocations need d = 3 pmfs; no allocation for {missing}', returncode=EXIT_USAGE
            )
        AllocationService.write_csv([(report['label'], report['shapley']) for report in reports], self.stdout)

    def _write_table(self, reports):
        header = ['pmf', 'p', 'vertex', 'rho12', 'rho13', 'rho23', 'class',
                  'Sigma-cm', 'Sigma-cx', 'V(S)', 'phi', 'modularity']
        self.stdout.write('| ' + ' | '.join(header) + ' |')
        self.stdout.write('|' + '---|' * len(header))
        for report in reports:
            rho = report['correlation']['pairwise']
            shapley = report.get('shapley')
            row = [
                report['label'],
                report['p'],
                'yes' if report['is_vertex'] else 'no',
                self._pair(rho, 0, 1), self._pair(rho, 0, 2), self._pair(rho, 1, 2),
                report['correlation']['classification'],
                self._flag(report.get('sigma_countermonotone')),
                self._flag(report.get('sigma_cx_smallest')),
                report['variance_of_sum'],
                ', '.join(shapley['phis']) if shapley else '-',
                shapley['modularity'] if shapley else '-',
            ]
            self.stdout.write('| ' + ' | '.join(str(cell) for cell in row) + ' |')

    @staticmethod
    def _pair(rho, i, j):
        return rho[i][j] if j < len(rho) else '-'

    @staticmethod
    def _flag(value):
        if value is None:
            return '-'
        return 'yes' if value else 'no'
