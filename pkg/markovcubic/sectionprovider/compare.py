from ..harness import ComparisonReport, cmd_compare
from .sectionprovider import ExperimentSectionProvider


class CompareSectionProvider(ExperimentSectionProvider):
    """
    Model, group and empirical cycle data side by side. The section fails
    when an observed shape lies outside the model support or the exact
    model and group distributions differ.
    """

    def run(self) -> ComparisonReport:
        return cmd_compare(self.experiment)

    def get_headline(self, result: ComparisonReport) -> str:
        return f"Comparison at level {result.level}"
