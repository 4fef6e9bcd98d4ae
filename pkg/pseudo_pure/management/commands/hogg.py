from pseudo_pure.errors import InputError
from pseudo_pure.hogg import hogg_run, parse_formula
from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.prep import prepare_pseudo_pure
from pseudo_pure.serialization import matrix_to_json


class Command(SimulationCommand):
    help = "Run Hogg's 1-SAT search on a pseudo-pure |00> state"

    def add_command_arguments(self, parser):
        parser.add_argument("--formula", required=True, help="literals V<k> or !V<k> joined by '&'")
        parser.add_argument("--state", help="pseudo-pure |00> deviation matrix (prepared when omitted)")

    def simulate(self, config, formula, state, **options):
        system = config.system
        if system.n_spins != 2:
            raise InputError("the search runs on two-spin systems", n_spins=system.n_spins)
        formula = parse_formula(formula, n_vars=system.n_spins)
        if state:
            rho = config.state(state)
        else:
            rho = prepare_pseudo_pure(system, "0" * system.n_spins, seed=config.seed).rho
        outcome = hogg_run(rho, formula)
        return {
            "system": system.name,
            "formula": str(formula),
            "solution": formula.solution(),
            "probabilities": outcome.probabilities,
            "rho_final": matrix_to_json(outcome.rho_final),
        }
