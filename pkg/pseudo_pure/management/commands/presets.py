from pseudo_pure.management.base import SimulationCommand
from pseudo_pure.presets import PUBLISHED_ANGLES, presets
from pseudo_pure.serialization import system_to_dict


class Command(SimulationCommand):
    help = "List the built-in spin systems and their published pulse angles"
    uses_system = False

    def simulate(self, config, **options):
        return {
            "presets": [dict(system_to_dict(system), published_angles=PUBLISHED_ANGLES.get(system.name))
                        for system in presets()],
        }
