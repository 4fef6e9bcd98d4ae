from pseudo_pure.errors import InputError
from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.prep import prepare_pseudo_pure
from pseudo_pure.pulse_dsl import compile_program, load_program, run
from pseudo_pure.serialization import matrix_to_json
from pseudo_pure.spin_core import thermal_deviation


class Command(SimulationCommand):
    help = "Run a pulse program on the thermal state, a prepared pseudo-pure state or a state file"

    def add_command_arguments(self, parser):
        parser.add_argument("--program", required=True, help="pulse program file")
        initial = parser.add_mutually_exclusive_group()
        initial.add_argument("--initial", default="thermal",
                             help="'thermal' or the bitstring of a pseudo-pure state to prepare first")
        initial.add_argument("--state", help="initial deviation matrix file")

    def initial_state(self, config, initial, state):
        if state:
            return config.state(state)
        if initial == "thermal":
            return thermal_deviation(config.system)
        try:
            return prepare_pseudo_pure(config.system, config.target(initial), seed=config.seed).rho
        except InputError as e:
            raise InputError(f"--initial must be 'thermal' or a bitstring: {e.message}", initial=initial)

    def simulate(self, config, program, initial, state, **options):
        sequence = compile_program(load_program(program), config.system)
        rho = run(sequence, self.initial_state(config, initial, state))
        return {"system": config.system.name, "program": program, "matrix": matrix_to_json(rho)}
