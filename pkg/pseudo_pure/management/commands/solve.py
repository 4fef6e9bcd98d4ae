from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.prep import default_cascade, solve_angles


class Command(SimulationCommand):
    help = "Solve the selective-pulse angles that prepare a pseudo-pure state"

    def add_command_arguments(self, parser):
        parser.add_argument("--target", required=True, help="target basis state as a bitstring, e.g. 00")
        parser.add_argument("--grid", type=int, help="starts per angle on the uniform grid")
        parser.add_argument("--tol", type=float, help="residual-norm tolerance")
        parser.add_argument("--workers", type=int, help="threads for independent starts")
        parser.add_argument("--seed", type=int, help="seed for random starts (more than six angles)")

    def simulate(self, config, target, grid, tol, workers, **options):
        spec = default_cascade(config.system.n_spins, config.target(target))
        result = solve_angles(config.system, spec, grid_per_dim=grid, newton_tol=tol,
                              workers=workers, seed=config.seed)
        return {
            "system": config.system.name,
            "target": target,
            "cascade": [
                {"level_from": step.level_from, "level_to": step.level_to, "spin": step.spin, "label": label}
                for step, label in zip(spec.steps, spec.describe())
            ],
            "roots": result.roots,
            "residual_norms": result.residual_norms,
            "best_root": result.best_root,
            "best_residual": result.best_residual,
            "starts_tried": result.starts_tried,
            "converged_starts": sum(result.converged),
            "rejected_roots": result.rejected,
        }
