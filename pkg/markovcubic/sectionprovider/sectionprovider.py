import abc
from typing import List, Optional

from ..harness import ExperimentConfig
from ..section import Section


class SectionProvider(abc.ABC):
    """
    An abstract class for a class that provides report sections.
    """

    def get_sections(self) -> List["Section"]:
        """
        Get a list of sections from this Provider.
        """
        ...


class ExperimentSectionProvider(SectionProvider):
    """
    A provider that runs one experiment and renders its result.

    Arguments:
        experiment: A complete ExperimentConfig. If absent, one is built from
            the remaining keyword arguments (the "config" entry of a section).

    """

    headline = "Experiment"

    def __init__(self, experiment: Optional[ExperimentConfig] = None, **kwargs):
        self.experiment = experiment or ExperimentConfig(**kwargs)

    @abc.abstractmethod
    def run(self):
        ...

    def get_headline(self, result) -> str:
        return self.headline

    def get_sections(self) -> List[Section]:
        result = self.run()
        return [
            Section(
                headline=self.get_headline(result),
                body_html=result.to_html(),
                data=result.to_json(),
                rows=result.to_rows(),
                failed=getattr(result, "failed", False),
            )
        ]


class CustomTextSectionProvider(SectionProvider):
    def __init__(self, headline: str = None, text: str = None):
        self.text = text or ""
        self.headline = headline

    def get_sections(self) -> List[Section]:
        return [Section(headline=self.headline, body_text=self.text)]
