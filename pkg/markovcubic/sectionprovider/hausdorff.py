from typing import List

from ..harness import cmd_hausdorff
from ..section import Section
from .sectionprovider import SectionProvider


class HausdorffSectionProvider(SectionProvider):
    def __init__(self, max_level: int = 12):
        self.max_level = int(max_level)

    def get_sections(self) -> List[Section]:
        table = cmd_hausdorff(self.max_level)
        return [
            Section(
                headline="Hausdorff dimension of the Markov groups",
                body_html=table.to_html(),
                data=table.to_json(),
                rows=table.to_rows(),
            )
        ]
