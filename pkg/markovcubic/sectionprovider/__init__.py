from .sectionprovider import SectionProvider  # noqa
