from ..harness import FactorSweep, cmd_factor
from .sectionprovider import ExperimentSectionProvider


class FactorSectionProvider(ExperimentSectionProvider):
    def run(self) -> FactorSweep:
        return cmd_factor(self.experiment)

    def get_headline(self, result: FactorSweep) -> str:
        cubic = self.experiment.cubic
        return f"Factorizations of {cubic.name} at level {result.level}"
