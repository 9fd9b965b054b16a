import enum
import json
from fractions import Fraction
from typing import List, Union


class ResourceLimitError(RuntimeError):
    """
    Raised when a computation would exceed a configured size bound
    (support cap, enumeration cap or degree bound).
    """


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    WITHIN_TOLERANCE = "within-tolerance"
    REPORTED = "reported"


def htmlize(text: Union[str, List[str]]) -> str:
    """
    Generate HTML paragraphs from a text string or a list of lines.
    """
    if isinstance(text, list):
        return "".join([f"<p>{line}</p>" for line in text])
    return f"<p>{text}</p>"


def fraction_to_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(f"Invalid rational number {text!r}") from err


def load_config_file(filepath: str) -> dict:
    try:
        with open(filepath, "r") as fh:
            config_dict = json.load(fh)
    except ValueError as err:
        raise ValueError("Syntax error in config file {0}".format(filepath)) from err
    return config_dict


def construct_section_providers_from_config_dict(config: dict):
    """
    Build the providers listed under "sections". Top-level experiment keys
    ("poly", "t", "samples", "seed", ...) are defaults for every experiment
    section; a section's own "config" overrides them.
    """
    from dataclasses import fields

    from markovcubic.harness import ExperimentConfig
    from markovcubic.sectionprovider.sectionprovider import ExperimentSectionProvider
    from markovcubic.sectionprovider.sectionprovider import CustomTextSectionProvider
    from markovcubic.sectionprovider.model import ModelSectionProvider
    from markovcubic.sectionprovider.group import GroupSectionProvider
    from markovcubic.sectionprovider.factor import FactorSectionProvider
    from markovcubic.sectionprovider.compare import CompareSectionProvider
    from markovcubic.sectionprovider.hausdorff import HausdorffSectionProvider

    SectionProviderConfigNames = {
        "text": CustomTextSectionProvider,
        "model": ModelSectionProvider,
        "group": GroupSectionProvider,
        "factor": FactorSectionProvider,
        "compare": CompareSectionProvider,
        "hausdorff": HausdorffSectionProvider,
    }

    if "sections" not in config:
        return []

    experiment_keys = {f.name for f in fields(ExperimentConfig)}
    defaults = {key: value for key, value in config.items() if key in experiment_keys}

    sections = []

    for provider_config in config["sections"]:
        provider_name = provider_config["provider"]
        if provider_name not in SectionProviderConfigNames:
            raise ValueError(f"Provider {provider_name} does not exist.")
        if provider_config.get("skip"):
            continue
        arguments = provider_config["config"] if "config" in provider_config else {}
        provider = SectionProviderConfigNames[provider_name]
        if issubclass(provider, ExperimentSectionProvider):
            arguments = {**defaults, **arguments}
        elif provider is HausdorffSectionProvider and "max_level" in defaults:
            arguments = {"max_level": defaults["max_level"], **arguments}
        sections.append(provider(**arguments))
    return sections
