from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.models import ReadoutPulse
from pseudo_pure.spectro_tomo import plot_spectra, readout_spectrum


class Command(SimulationCommand):
    help = "SVG stick plot of every spin's spectrum after a hard readout pulse"
    output_format = "svg"

    def add_command_arguments(self, parser):
        parser.add_argument("--state", required=True, help="deviation matrix file")
        parser.add_argument("--pulse", choices=ReadoutPulse.values, default=ReadoutPulse.X90)

    def simulate(self, config, state, pulse, **options):
        system = config.system
        rho = config.state(state)
        with_frequencies = system.n_spins == 1 or system.j_hz is not None
        spectra = [readout_spectrum(rho, spin, system, pulse, with_frequencies)
                   for spin in range(1, system.n_spins + 1)]
        return plot_spectra(spectra)
