import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from django.conf import settings
from django.core.management.base import BaseCommand

from pseudo_pure.conf import get_setting
from pseudo_pure.errors import InputError, PulseSimError
from pseudo_pure.models import DeviationMatrix, LevelIndex, SpinSystem
from pseudo_pure.serialization import canonical_dumps, load_state, load_system
from pseudo_pure.utils import level_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    system_path: Optional[str]
    system: Optional[SpinSystem]
    output: Optional[Path] = None
    output_format: str = "json"
    seed: Optional[int] = None

    def target(self, bits: str) -> LevelIndex:
        return level_of(bits, self.system.n_spins)

    def state(self, path: str) -> DeviationMatrix:
        rho = load_state(path)
        if self.system is not None and rho.shape != (self.system.dim, self.system.dim):
            raise InputError("state and spin system sizes differ", state=list(rho.shape),
                             n_spins=self.system.n_spins)
        return rho


def parse_angles(text: str) -> list:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise InputError(f"malformed angle list {text!r}", angles=text)


class SimulationCommand(BaseCommand):
    """Shared plumbing: --system/--output options, canonical output and the error contract.

    Subclasses implement `simulate(config, **options)` and return either a
    JSON-able payload or already formatted text.
    """

    requires_system_checks = []
    uses_system = True
    output_format = "json"

    def add_arguments(self, parser):
        if self.uses_system:
            parser.add_argument("--system", required=True, help="spin system JSON file or preset name")
        parser.add_argument("--output", help="write the result to this file instead of standard output")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def simulate(self, config: RunConfig, **options) -> Any:
        raise NotImplementedError

    def handle(self, *args, **options):
        system_path = options.get("system")
        seed = options.get("seed")
        config = RunConfig(
            system_path=system_path,
            system=load_system(system_path) if system_path else None,
            output=Path(options["output"]) if options.get("output") else None,
            output_format=self.output_format,
            seed=get_setting("PPSIM_SEED") if seed is None else seed,
        )
        result = self.simulate(config, **options)
        text = result if isinstance(result, str) else canonical_dumps(result)
        self.emit(text, config)

    def emit(self, text: str, config: RunConfig):
        if config.output is None:
            self.stdout.write(text, ending="" if text.endswith("\n") else "\n")
            return
        try:
            config.output.write_text(text if text.endswith("\n") else text + "\n")
        except OSError as e:
            raise InputError(f"cannot write {config.output}: {e.strerror}", path=str(config.output))

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except PulseSimError as e:
            if settings.DEBUG:
                logger.error(e.message, exc_info=e)
            sys.stderr.write(canonical_dumps(e.as_record()) + "\n")
            sys.exit(e.exit_code)
