#                   Copyright (c) 2021, Serum Studio

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in
# all copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN
# THE SOFTWARE.

#: This source file is responsible for printing output with colour tags.

import logging
import re
import sys
from builtins import print as _print
from typing import IO
from typing import Any
from typing import Optional

from .constants import COLOR_SUPPORTED
from .constants import all_tags
from .constants import bg_colors
from .constants import rule_colors
from .constants import rule_styles
from .errors import TagNotFound

__all__ = ["print", "parse_color", "ColorHandler"]

if COLOR_SUPPORTED:
    import colorama

    colorama.init()

#: [red], [bg red], [b], [/] and [/red]
TAG_PATTERN = re.compile(r"\[(/?)([a-z]*)(?:\s+([a-z]+))?\]")


def parse_color(text: str, strip: Optional[bool] = False) -> str:
    """
    Replace the colour tags of `text` by ANSI sequences, or remove them
    when `strip` is set or colours are not supported. Brackets that are not
    one of the known tags are left untouched.

    Parameters:
    ---
        text (str):
            The tagged text, e.g. "[red]error[/]".

        strip (bool):
            Drop the tags instead of rendering them.

    Example:
    ---
        >>> parse_color("[green]ok[/]", strip=True)
        'ok'
    """

    def replace(match):
        closing, name, value = match.groups()

        if name not in all_tags and not (closing and name == ""):
            return match.group(0)

        if strip or not COLOR_SUPPORTED:
            return ""

        if closing:
            return rule_colors["reset"] + bg_colors["reset"] + colorama.Style.RESET_ALL

        if name == "bg":
            if value not in bg_colors:
                raise TagNotFound("Background %s is not defined" % (value))
            return bg_colors[value]

        if name in rule_styles:
            return rule_styles[name]

        return rule_colors[name]

    return TAG_PATTERN.sub(replace, text)


def print(
    value: Any,
    sep: Optional[str] = " ",
    end: Optional[str] = "\n",
    file: Optional[IO[str]] = None,
    flush: Optional[bool] = False,
):
    """
    A colour aware wrapper around the builtin print. Tags are rendered when
    the target stream is a terminal and stripped otherwise, so redirected
    output never carries escape sequences.

    Example:
    ---

        >>> from yamabe import print
        >>> print('[red]This is red[/]')
        This is red

    """

    stream = file if file is not None else sys.stdout
    strip = not getattr(stream, "isatty", lambda: False)()

    _print(parse_color(str(value), strip=strip), sep=sep, end=end, file=stream, flush=flush)


class ColorHandler(logging.Handler):
    """
    A logging handler that writes records to stderr through `print`,
    colouring the level name.
    """

    level_colors = {
        logging.DEBUG: "cyan",
        logging.INFO: "green",
        logging.WARNING: "yellow",
        logging.ERROR: "red",
        logging.CRITICAL: "red",
    }

    def __init__(self, stream: Optional[IO[str]] = None):
        super().__init__()
        self.stream = stream

    def emit(self, record):
        try:
            color = self.level_colors.get(record.levelno, "white")
            message = record.getMessage()
            print(
                "[%s]%s[/]: %s" % (color, record.levelname.lower(), message),
                file=self.stream if self.stream is not None else sys.stderr,
            )
        except Exception:
            self.handleError(record)
