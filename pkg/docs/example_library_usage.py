import logging

from markovcubic.harness import ExperimentConfig
from markovcubic.report import Report
from markovcubic.sectionprovider.compare import CompareSectionProvider
from markovcubic.sectionprovider.group import GroupSectionProvider
from markovcubic.sectionprovider.hausdorff import HausdorffSectionProvider

logging.basicConfig(level=logging.INFO)

experiment = ExperimentConfig(poly="-2z^3+3z^2", t=3, level=2, prime_bound=20000, workers=4)

report = Report(
    [
        GroupSectionProvider(experiment),
        CompareSectionProvider(experiment),
        HausdorffSectionProvider(max_level=12),
    ],
    title="Model 4 at level 2",
)
report.write("model4.html", "html")
if report.failed:
    logging.warning("Some checks failed, see model4.html")
