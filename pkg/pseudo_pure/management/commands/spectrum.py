import csv
import io

from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.models import ReadoutPulse
from pseudo_pure.serialization import canonical
from pseudo_pure.spectro_tomo import readout_spectrum


class Command(SimulationCommand):
    help = "Stick spectrum of one spin after a hard readout pulse, as CSV"
    output_format = "csv"

    def add_command_arguments(self, parser):
        parser.add_argument("--state", required=True, help="deviation matrix file")
        parser.add_argument("--spin", type=int, required=True, help="observed spin (1-based)")
        parser.add_argument("--pulse", choices=ReadoutPulse.values, default=ReadoutPulse.X90)

    def simulate(self, config, state, spin, pulse, **options):
        system = config.system
        # Homonuclear presets carry no couplings; their lines are listed without positions.
        with_frequencies = system.n_spins == 1 or system.j_hz is not None
        spectrum = readout_spectrum(config.state(state), spin, system, pulse, with_frequencies)
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["freq_hz", "re", "im", "transition"])
        for line in spectrum.lines:
            re, im = canonical(line.amplitude)
            freq = "" if line.freq_hz is None else canonical(line.freq_hz)
            writer.writerow([freq, re, im, "%d-%d" % line.transition])
        return buffer.getvalue()
