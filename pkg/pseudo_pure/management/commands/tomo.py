from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.serialization import matrix_to_json
from pseudo_pure.spectro_tomo import reconstruct, simulate_measurements
from pseudo_pure.spin_core import traceless_part


class Command(SimulationCommand):
    help = "Simulate readout of every tomography setting and reconstruct the deviation matrix"

    def add_command_arguments(self, parser):
        parser.add_argument("--state", required=True, help="deviation matrix file")
        parser.add_argument("--noise", type=float, default=0.0,
                            help="noise standard deviation relative to the largest thermal line")
        parser.add_argument("--seed", type=int, help="noise seed (defaults to PPSIM_SEED)")

    def simulate(self, config, state, noise, **options):
        # Only the traceless part is observable, so that is what the result is compared against.
        truth = traceless_part(config.state(state))
        measurements = simulate_measurements(truth, config.system, noise_sigma=noise, seed=config.seed)
        result = reconstruct(measurements, config.system, reference=truth)
        return {
            "system": config.system.name,
            "matrix": matrix_to_json(result.reconstructed),
            "residual_norm": result.residual_norm,
            "settings_used": result.settings_used,
            "max_rel_error": result.max_rel_error,
            "noise_sigma": measurements.noise_sigma,
            "seed": measurements.seed,
        }
