import json

from django.core.management.base import BaseCommand

from frechet.choices import OutputFormat
from frechet.services import AllocationService, SigmaCmService

from ._common import parse_param_arg


class Command(BaseCommand):
    help = 'Describe the Sigma-countermonotone pmfs of F_3(p) and their Shapley allocations'

    def add_arguments(self, parser):
        parser.add_argument('--p', required=True, help="Margin p as a canonical 'num/den' rational in (0, 1/2]")
        parser.add_argument('--format', default=OutputFormat.TABLE,
                            choices=[OutputFormat.TABLE, OutputFormat.JSON, OutputFormat.CSV])

    def handle(self, *args, **options):
        param = parse_param_arg(options['p'])
        if options['format'] == OutputFormat.CSV:
            AllocationService.write_csv(SigmaCmService.allocations(param), self.stdout)
            return

        report = SigmaCmService.build(param)
        if options['format'] == OutputFormat.JSON:
            self.stdout.write(json.dumps(report, indent=2))
            return

        write = self.stdout.write
        if report['joint_mix']:
            write(f"p={report['p']}: joint mix, S = 1 almost surely")
        else:
            write(f"p={report['p']}: {len(report['generators'])} generator(s)")
        for generator in report['generators']:
            write(f"  {generator['label']}: ({', '.join(generator['values'])})")
        write(f"mu2+ = {report['mu2_plus']}")
        write(f"V(S) = {report['variance_of_sum']}")
        write(f"sum law = ({', '.join(report['sum_law'])})")
        for label, phis in report['shapley'].items():
            write(f"phi({label}) = ({', '.join(phis)})")
        if report['exchangeable']:
            fe = report['exchangeable']
            write(f"exchangeable member: ({', '.join(fe['values'])})")
            write(f"  equi-correlation = {fe['equi_correlation']}")
            write(f"  phi = ({', '.join(fe['shapley'])}), {fe['modularity']}")
        if report['lower_frechet_bound']:
            write(f"lower Frechet bound: ({', '.join(report['lower_frechet_bound'])})")
