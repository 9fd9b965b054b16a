import pathlib

DEFAULT_CSS = """
    @page {
        margin: 0.6in;
    }

    body {
        font-family: "DejaVu Sans", sans-serif;
    }

    .header h1 {
        font-size: 20pt;
        margin-bottom: 0.1em;
    }

    .header h4 {
        font-weight: normal;
        color: #555555;
    }

    article.section {
        page-break-inside: avoid;
        margin-bottom: 1.5em;
    }

    article>h1 {
        font-size: 15pt;
        font-weight: 400;
        border-bottom: 1px solid #dedede;
    }

    .failed {
        color: #b00000;
        font-weight: bold;
    }

    table {
        border-collapse: collapse;
    }

    td, th {
        border: 1px solid #bbbbbb;
        padding: 0.2em 0.6em;
        text-align: left;
    }
"""


def read_css(path: pathlib.Path):
    return path.read_text()


class Style:
    """
    The CSS of a rendered report: the built-in sheet, or a css file.
    """

    def __init__(self, style=""):
        self._css = DEFAULT_CSS
        if style:
            path = pathlib.Path(style)
            if path.with_suffix(".css").is_file():
                self._css = read_css(path.with_suffix(".css"))
            else:
                print(f"Oops! {style} style not found. Using the default style.")

    def get_css(self, font_size: int = None) -> str:
        css = self._css
        if font_size:
            css += f"""
        body {{
            font-size: {font_size}pt !important;
        }}
        """
        return css
