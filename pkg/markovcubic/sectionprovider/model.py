from ..harness import ModelResult, cmd_model
from .sectionprovider import ExperimentSectionProvider


class ModelSectionProvider(ExperimentSectionProvider):
    def run(self) -> ModelResult:
        return cmd_model(self.experiment)

    def get_headline(self, result: ModelResult) -> str:
        return f"Model {result.model_id} at level {result.level}"
