from ..harness import GroupResult, cmd_group
from .sectionprovider import ExperimentSectionProvider


class GroupSectionProvider(ExperimentSectionProvider):
    def run(self) -> GroupResult:
        return cmd_group(self.experiment)

    def get_headline(self, result: GroupResult) -> str:
        return f"Markov groups at level {result.level} (orbit length {result.orbit_length})"
