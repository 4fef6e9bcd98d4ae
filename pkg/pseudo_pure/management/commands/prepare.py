import logging

from pseudo_pure.errors import NotPseudoPureError
from pseudo_pure.management.base import SimulationCommand, parse_angles
from pseudo_pure.prep import prepare_pseudo_pure, relative_spread
from pseudo_pure.serialization import matrix_to_json
from pseudo_pure.spin_core import population_spread, pure_part
from pseudo_pure.utils import bits_of

logger = logging.getLogger(__name__)


class Command(SimulationCommand):
    help = "Prepare a pseudo-pure state: thermal state, simultaneous selective pulses, crusher"

    def add_command_arguments(self, parser):
        parser.add_argument("--target", required=True, help="target basis state as a bitstring, e.g. 00")
        parser.add_argument("--angles", help="comma-separated pulse angles in degrees (solved when omitted)")
        parser.add_argument("--grid", type=int, help="starts per angle on the uniform grid")
        parser.add_argument("--workers", type=int, help="threads for independent starts")

    def simulate(self, config, target, angles, grid, workers, **options):
        level = config.target(target)
        angles = parse_angles(angles) if angles else None
        solver_options = {"grid_per_dim": grid, "workers": workers, "seed": config.seed} if angles is None else {}
        preparation = prepare_pseudo_pure(config.system, level, angles=angles, **solver_options)
        rho = preparation.rho

        try:
            part = pure_part(rho)
            summary = {"uniform_coeff": part.uniform_coeff, "pure_coeff": part.pure_coeff,
                       "target": bits_of(part.target, config.system.n_spins), "spread": part.spread}
        except NotPseudoPureError as e:
            logger.warning("prepared state is not pseudo-pure: %s", e.message)
            summary = None

        used = angles if angles is not None else preparation.solver_result.best_root
        return {
            "system": config.system.name,
            "target": target,
            "angles": list(used),
            "matrix": matrix_to_json(rho),
            "pure_part": summary,
            "population_spread": population_spread(rho, level),
            "relative_spread": relative_spread(rho, config.system, level),
        }
