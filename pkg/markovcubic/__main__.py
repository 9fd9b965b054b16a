import logging
import sys

from markovcubic.harness import ExperimentConfig
from markovcubic.multiparser import MultiParser
from markovcubic.report import Report
from markovcubic.sectionprovider.compare import CompareSectionProvider
from markovcubic.sectionprovider.factor import FactorSectionProvider
from markovcubic.sectionprovider.group import GroupSectionProvider
from markovcubic.sectionprovider.hausdorff import HausdorffSectionProvider
from markovcubic.sectionprovider.model import ModelSectionProvider
from markovcubic.util import ResourceLimitError, construct_section_providers_from_config_dict

EXPERIMENT_PROVIDERS = {
    "model": ModelSectionProvider,
    "group": GroupSectionProvider,
    "factor": FactorSectionProvider,
    "compare": CompareSectionProvider,
}


def providers_for_command(multiparser: MultiParser) -> list:
    command = multiparser.command
    if command == "report":
        return construct_section_providers_from_config_dict(multiparser.config)
    if command == "hausdorff":
        return [HausdorffSectionProvider(multiparser.argumentOrConfig("max_level", 12))]
    experiment = ExperimentConfig.from_multiparser(multiparser)
    return [EXPERIMENT_PROVIDERS[command](experiment)]


def main(argv=None):
    multiparser = MultiParser(argv)
    logging.basicConfig(
        level=logging.INFO if multiparser.argumentOrConfig("verbose") else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )

    filename = multiparser.argumentOrConfig("out")
    fmt = multiparser.output_format()

    try:
        report = Report(
            providers_for_command(multiparser),
            title=multiparser.config.get("title"),
            subtitle=multiparser.config.get("subtitle"),
        )
        output = report.write(
            filename,
            fmt,
            style=multiparser.argumentOrConfig("style", ""),
            font_size=multiparser.argumentOrConfig("font_size", 11),
        )
    except ResourceLimitError as err:
        print(f"{err}. Rerun with --mode sampled, a larger --max-support or a smaller --level.")
        return 2
    except ValueError as err:
        print(f"Invalid arguments: {err}")
        return 2

    if filename:
        print(f"Wrote {fmt} output to {output}")
    else:
        sys.stdout.write(output)

    if report.failed:
        for section in report.get_sections():
            if section.failed:
                print(f"Failed checks in section '{section.headline}'.")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
