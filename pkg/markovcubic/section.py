from typing import List, Optional, Union

from .util import htmlize


class Section:
    def __init__(
        self,
        headline: Optional[str],
        body_html: str = None,
        body_text: Union[str, List[str]] = None,
        data: Optional[dict] = None,
        rows: Optional[List[dict]] = None,
        failed: bool = False,
    ) -> None:
        """
        Create a new Section with a headline, a rendered body and the
        machine-readable result it was made from.
        """
        self.headline = headline
        if body_html is not None:
            self.body_html = body_html
        elif body_text is not None:
            self.body_html = htmlize(body_text)
        else:
            raise ValueError(
                "You must provide at least one of body_html or body_text "
                "to the Section constructor"
            )
        self.data = data
        self.rows = rows or []
        self.failed = failed

    def to_html(self) -> str:
        headline = f"<h1>{self.headline}</h1>" if self.headline else ""
        status = "<p class='failed'>Failed checks</p>" if self.failed else ""
        return f"""
        <article class="section">
            {headline}
            {status}
            {self.body_html}
        </article>
        """
