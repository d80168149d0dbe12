import csv
import json

from django.core.management.base import BaseCommand, CommandError

from frechet.choices import OutputFormat
from frechet.core import atom_label, atoms
from frechet.serializers import ExtremalSetSerializer
from frechet.services import ExtremalService

from ._common import EXIT_USAGE, decimal_text, parse_param_arg, rational_text


class Command(BaseCommand):
    help = 'Print the extremal pmfs of F_d(p); d=3 from the closed-form tables, d=2 and d=4 by vertex enumeration'

    def add_arguments(self, parser):
        parser.add_argument('--p', required=True, help="Margin p as a canonical 'num/den' rational in (0, 1/2]")
        parser.add_argument('--d', type=int, default=3, help='Dimension (2, 3 or 4)')
        parser.add_argument('--format', default=OutputFormat.TABLE, choices=OutputFormat.values)
        parser.add_argument('--decimals', type=int, default=None,
                            help='Append display-only decimals with this many places')

    def handle(self, *args, **options):
        param = parse_param_arg(options['p'])
        d = options['d']
        if d not in (2, 3, 4):
            raise CommandError(f'--d must be 2, 3 or 4, got {d}', returncode=EXIT_USAGE)
        places = options['decimals']
        if places is not None and places < 0:
            raise CommandError('--decimals must be nonnegative', returncode=EXIT_USAGE)

        es = ExtremalService.get_extremals(param, d=d)
        fmt = options['format']
        if fmt == OutputFormat.JSON:
            self.stdout.write(json.dumps(ExtremalSetSerializer(es).data, indent=2))
        elif fmt == OutputFormat.CSV:
            self._write_csv(es, places)
        else:
            self._write_table(es, places)

    def _write_csv(self, es, places):
        labels = [atom_label(x) for x in atoms(es.d)]
        header = ['label'] + labels + ['tag']
        if places is not None:
            header += [f'{label}_decimal' for label in labels]
        writer = csv.writer(self.stdout, lineterminator='\n')
        writer.writerow(header)
        for label, f, tag in es:
            row = [label] + [rational_text(v) for v in f.values] + [tag]
            if places is not None:
                row += [decimal_text(v, places) for v in f.values]
            writer.writerow(row)

    def _write_table(self, es, places):
        # atoms as rows, one column per extremal pmf
        cells = [['x'] + list(es.labels)]
        for k, x in enumerate(atoms(es.d)):
            cells.append([atom_label(x)] + [rational_text(f.values[k], places) for f in es.vertices])
        cells.append(['tag'] + list(es.tags))
        widths = [max(len(row[c]) for row in cells) for c in range(len(cells[0]))]
        self.stdout.write(f'F_{es.d}({es.param}): {len(es)} extremal pmfs')
        for row in cells:
            self.stdout.write('  '.join(cell.rjust(w) for cell, w in zip(row, widths)))
