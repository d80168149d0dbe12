from django.core.management.base import BaseCommand, CommandError

from frechet.services import SWEEP_DENOMINATOR, SweepService

from ._common import EXIT_IO, EXIT_SEMANTIC, EXIT_USAGE


class Command(BaseCommand):
    help = 'Count the extremal pmfs of F_4(s/100) over a range of s by vertex enumeration'

    def add_arguments(self, parser):
        parser.add_argument('--from', dest='s_from', type=int, default=1)
        parser.add_argument('--to', dest='s_to', type=int, default=SWEEP_DENOMINATOR // 2)
        parser.add_argument('--out', default=None, help='CSV path (s,p,nr,elapsed_ms); stdout when omitted')
        parser.add_argument('--workers', type=int, default=None, help='Process count; overrides BP_THREADS')
        parser.add_argument('--record', action='store_true', help='Persist rows as SweepRecord')

    def handle(self, *args, **options):
        s_from, s_to = options['s_from'], options['s_to']
        t = SWEEP_DENOMINATOR
        if not 1 <= s_from <= s_to <= t // 2:
            raise CommandError(
                f'Expected 1 <= --from <= --to <= {t // 2}, got {s_from}..{s_to}', returncode=EXIT_USAGE
            )
        workers = options['workers']
        if workers is not None and workers < 1:
            raise CommandError('--workers must be at least 1', returncode=EXIT_USAGE)

        points = SweepService.run(range(s_from, s_to + 1), t=t, d=4, workers=workers)

        out = options['out']
        if out:
            try:
                with open(out, 'w', newline='') as handle:
                    SweepService.write_csv(points, handle)
            except OSError as e:
                raise CommandError(f'Cannot write {out}: {e}', returncode=EXIT_IO)
            self.stdout.write('s nr')
            for point in points:
                self.stdout.write(f'{point.s} {point.vertex_count}')
        else:
            SweepService.write_csv(points, self.stdout)

        insane = [point.s for point in points if not point.sane]
        if insane:
            raise CommandError(f'Vertex sanity check failed for s = {insane}', returncode=EXIT_SEMANTIC)

        if options['record']:
            conflicts = SweepService.record(points)
            if conflicts:
                raise CommandError(
                    f'Stored counts differ for s = {[point.s for point in conflicts]}', returncode=EXIT_SEMANTIC
                )
            self.stdout.write(self.style.SUCCESS(f'Recorded {len(points)} sweep rows'))
