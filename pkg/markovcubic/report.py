import csv
import io
import json
import pathlib
import tempfile
from typing import List, Optional, TextIO, Union

from .section import Section
from .sectionprovider.sectionprovider import SectionProvider
from .styles import Style


class Report:
    """
    A high-level class that collects the sections of an experiment report
    and renders them as JSON, CSV, HTML or PDF.

    """

    def __init__(
        self,
        section_providers: List[SectionProvider],
        title: str = None,
        subtitle: str = None,
    ):
        """
        Create a new Report.

        Arguments:
            section_providers: A list of SectionProvider objects to render
            title: The title of the report
            subtitle: The subtitle of the report

        """
        self.section_providers = section_providers
        self.title = title if title else "Markov cubic report"
        self.subtitle = subtitle or ""
        self._sections: Optional[List[Section]] = None

    def get_sections(self) -> List[Section]:
        """
        Run every provider once and return the sections in provider order.

        Returns:
            List[Section]

        """
        if self._sections is None:
            sections: List[Section] = []
            for prov in self.section_providers:
                sections.extend(prov.get_sections())
            self._sections = sections
        return self._sections

    @property
    def failed(self) -> bool:
        return any(s.failed for s in self.get_sections())

    def to_json(self) -> str:
        """
        A single experiment is written as its own result; a multi-section
        report as a list of {headline, result} entries.
        """
        sections = [s for s in self.get_sections() if s.data is not None]
        if len(self.get_sections()) == 1 and sections:
            payload = sections[0].data
        else:
            payload = {
                "title": self.title,
                "sections": [
                    {"headline": s.headline, "result": s.data} for s in sections
                ],
            }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write_csv(self, fh: TextIO):
        rows = []
        for s in self.get_sections():
            for row in s.rows:
                rows.append({"section": s.headline or "", **row})
        fieldnames: List[str] = []
        for row in rows:
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        self.write_csv(buffer)
        return buffer.getvalue()

    def to_html(self) -> str:
        """
        Produce an HTML version of the Report.

        Returns:
            str: An HTML version of the report

        """
        sections = [s.to_html() for s in self.get_sections()]
        return f"""
            <html>
            <head>
                <meta
                    http-equiv="Content-type"
                    content="text/html;
                    charset=utf-8" />
                <meta charset="UTF-8" />
            </head>
            <body>
                <div class="header">
                    <h1>{self.title}</h1><h4>{self.subtitle}</h4>
                </div>
                <div class="sections">
                    {"<hr />".join(sections)}
                </div>
            </body>
            </html>
        """

    def to_pdf(
        self,
        filename: Union[str, io.BytesIO],
        style: str = "",
        font_size: int = 11,
    ) -> Optional[str]:
        """
        Renders the current Report to a PDF file on disk.

        Arguments:
            filename: The filename to save the PDF to. If this is an io.BytesIO
                object, the PDF will be written to the object instead and this
                function will return None.
            style: Path of a css file. Default: the built-in style
            font_size: The font size to use for the report. Default: 11

        Returns:
            str: The filename of the PDF file. If `filename` is an IO object,
                then this will return None.

        """
        from weasyprint import HTML, CSS
        from weasyprint.text.fonts import FontConfiguration

        font_config = FontConfiguration()
        h = HTML(string=self.to_html())
        c = CSS(
            string=Style(style).get_css(font_size),
            font_config=font_config,
            base_url=str(pathlib.Path.cwd()),
        )
        if isinstance(filename, str):
            h.write_pdf(filename, stylesheets=[c], font_config=font_config)
            return filename
        elif isinstance(filename, io.BytesIO):
            tf = tempfile.NamedTemporaryFile(suffix=".pdf")
            h.write_pdf(tf, stylesheets=[c], font_config=font_config)
            tf.seek(0)
            filename.write(tf.read())
            return None
        else:
            raise ValueError(f"Invalid filename {filename}")

    def write(self, filename: Optional[str], fmt: str, style: str = "", font_size: int = 11) -> Optional[str]:
        """
        Write the report in `fmt` to `filename`, or return it as a string
        when no filename is given.
        """
        if fmt == "pdf":
            if not filename:
                raise ValueError("PDF output needs --out")
            return self.to_pdf(filename, style=style, font_size=font_size)
        renderers = {"json": self.to_json, "csv": self.to_csv, "html": self.to_html}
        if fmt not in renderers:
            raise ValueError(f"Unknown output format '{fmt}'.")
        text = renderers[fmt]()
        if not filename:
            return text
        with open(filename, "w", newline="") as fh:
            fh.write(text)
        return filename
