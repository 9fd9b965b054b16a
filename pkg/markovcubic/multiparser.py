import argparse
import pathlib
from typing import Optional, Sequence

from markovcubic.util import load_config_file

COMMANDS = ("model", "group", "factor", "compare", "hausdorff", "report")


class NewLineFormatter(argparse.HelpFormatter):
    def _split_lines(self, text, width):
        if text.startswith("||"):
            return text[2:].splitlines()
        return argparse.HelpFormatter._split_lines(self, text, width)


class MultiParser:
    def __init__(self, argv: Optional[Sequence[str]] = None):
        """
        Creates a new MultiParser, which abstracts accessing command line
        arguments and config file entries.

        Arguments:
            argv: Arguments to parse instead of sys.argv

        """

        self.parser = argparse.ArgumentParser(
            prog="markovcubic",
            description="Markov models, Markov groups and finite-field factorization statistics for iterated post-critically finite cubics.",
            formatter_class=NewLineFormatter,
        )

        self.parser.add_argument(
            "command",
            choices=COMMANDS,
            help="||model:     propagate a factorization model\n"
            "group:     check the structure of the Markov groups\n"
            "factor:    sweep primes and tabulate factorization shapes\n"
            "compare:   compare model, group and empirical distributions\n"
            "hausdorff: tabulate log|M_n| / log|Aut(T_n)|\n"
            "report:    render the sections listed in the config",
        )
        self.parser.add_argument(
            "-c",
            "--config",
            required=False,
            default="",
            help="The json file with settings and report sections.",
        )
        self.parser.add_argument(
            "-o",
            "--out",
            required=False,
            help="||Output path. The format follows --format, or else the\nextension (.json, .csv, .html, .pdf). Printed to stdout if absent.",
        )
        self.parser.add_argument(
            "--format",
            choices=("json", "csv", "html", "pdf"),
            required=False,
            help="Output format. Default: json",
        )
        self.parser.add_argument(
            "--poly", required=False, help="Catalog name of the cubic, e.g. -2z^3+3z^2"
        )
        self.parser.add_argument(
            "--coeffs",
            required=False,
            help="Coefficients a,b,c,d of a plain cubic az^3+bz^2+cz+d (no critical data).",
        )
        self.parser.add_argument(
            "--translation",
            required=False,
            help="Parameter a of a translated orbit-length-2 family.",
        )
        self.parser.add_argument("--t", required=False, help="The rational point t.")
        self.parser.add_argument("--level", type=int, required=False, help="The level n of f^n - t.")
        self.parser.add_argument("--prime-bound", dest="prime_bound", type=int, required=False)
        self.parser.add_argument(
            "--model", type=int, required=False, help="Model id, overriding the selection from f and t."
        )
        self.parser.add_argument(
            "--orbit-length", dest="orbit_length", type=int, choices=(1, 2), required=False
        )
        self.parser.add_argument("--samples", type=int, required=False)
        self.parser.add_argument("--seed", type=int, required=False)
        self.parser.add_argument(
            "--max-support",
            dest="max_support",
            type=int,
            required=False,
            help="Largest number of typed partitions kept during exact propagation.",
        )
        self.parser.add_argument(
            "--max-level",
            dest="max_level",
            type=int,
            required=False,
            help="Last level of the hausdorff table.",
        )
        self.parser.add_argument("--mode", choices=("auto", "exact", "sampled"), required=False)
        self.parser.add_argument("--workers", type=int, required=False)
        self.parser.add_argument(
            "--records", required=False, help="Write per-prime factorization records as JSON lines."
        )
        self.parser.add_argument(
            "--labels",
            action="store_true",
            default=None,
            help="Factor completely, label every factor and check the factorization laws.",
        )
        self.parser.add_argument(
            "--verbose", action="store_true", default=None, help="Log progress at INFO."
        )
        self.parser.add_argument(
            "--showconfig",
            action="store_true",
            required=False,
            default=None,
            help="Print out all config files and command line options in order loaded and the final config.",
        )
        self.args = self.parser.parse_args(argv)

        # These are in order of precedence, low to highest
        #  1. Home directory global configs
        #  2. Local directory from which markovcubic is called
        #  3. Specified on the command line.

        defaultconfigs = [
            str(pathlib.Path("~").expanduser()) + "/.markovcubic.json",
            "markovcubic.json",
        ]
        if self.args.config and self.args.config not in defaultconfigs:
            defaultconfigs.append(self.args.config)
        self.config = {}
        debug_configs = True if self.args.showconfig else None

        if debug_configs:
            import pprint

            pp = pprint.PrettyPrinter(indent=3)
            print(
                "\n".join(
                    [
                        "Command line arguments received:",
                        "(including default values)",
                        "--------------------------------",
                    ]
                )
            )
            pp.pprint(self.args)

        # A config file named on the command line must be readable.
        if self.args.config:
            try:
                load_config_file(self.args.config)
            except FileNotFoundError:
                print(
                    f"Couldn't find config file ({self.args.config}) "
                    "specified on the command line. Aborting."
                )
                exit(1)

        for defconfigfile in defaultconfigs:
            try:
                tempconfig = load_config_file(defconfigfile)
            except FileNotFoundError:
                continue
            if "sections" in tempconfig and "sections" in self.config:
                tempconfig["sections"] = self.config["sections"] + tempconfig["sections"]
            self.config.update(tempconfig)
            if debug_configs:
                print(
                    f"\nConfig options found in {defconfigfile}:"
                    "\n---------------------\n"
                )
                pp.pprint(tempconfig)

        if debug_configs:
            print("\nFinal config values are:\n------------------")
            pp.pprint(self.config)
            print("")

    @property
    def command(self) -> str:
        return self.args.command

    def argumentOrConfig(self, key, default=None, dependency=None):
        """
        Returns a command line argument or an entry from the config file

        Arguments:
            key: the command line option name (as in --key) or config entry
            default (str: None): the default value, returned if the key was not
                set both as a command line argument and a config entry
            dependency (str: None): the name of a dependency command line
                argument or config entry that must be present for this call to
                be valid

        Returns:
            If a command line option with 'key' name was set, returns it. Else,
                if a config entry named 'key' was set, returns it. If none of
                the previous was returned, returns the default value specified
                by the 'default' argument.

        """

        d = vars(self.args)
        if key in d and d[key] is not None:
            if dependency and d.get(dependency) is None and dependency not in self.config:
                self.parser.error(f"--{key} requires --{dependency}.")
            value = d[key]
        elif key in self.config:
            value = self.config[key]
            if value is None:
                value = default
        else:
            value = default

        return value

    def output_format(self) -> str:
        """--format, else the extension of --out, else json."""
        fmt = self.argumentOrConfig("format")
        if fmt:
            return fmt
        out = self.argumentOrConfig("out")
        if out:
            suffix = pathlib.Path(out).suffix.lstrip(".").lower()
            if suffix in ("json", "csv", "html", "pdf"):
                return suffix
        return "json"
