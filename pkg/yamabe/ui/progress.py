import sys
from contextlib import contextmanager
from typing import Callable
from typing import Iterator
from typing import Optional

from ..errors import PluginError

try:
    from alive_progress import alive_bar

except ModuleNotFoundError:
    alive_bar = None


def _noop(*args, **kwargs):
    pass


@contextmanager
def progressbar(
    total: Optional[int] = None,
    title: Optional[str] = None,
    enabled: bool = True,
    required: bool = False,
    **options
) -> Iterator[Callable[..., None]]:
    """
    An `alive_bar` when the `progress` extra is installed and stdout is a
    terminal, a do-nothing handle otherwise. Call the handle once per
    finished unit of work.

    Parameters:
    ---
        total (int):
            The expected number of calls, None when unknown.

        title (str):
            Shown in front of the bar.

        enabled (bool):
            False always gives the do-nothing handle.

        required (bool):
            Raise `PluginError` instead of falling back when
            `alive_progress` is missing.

        **options (dict):
            Passed on to `alive_bar`.

    Example:
    ---
        >>> with progressbar(3, "checks", enabled=False) as bar:
        ...     for _ in range(3):
        ...         bar()
    """

    if alive_bar is None and required:
        raise PluginError(
            "The progress plugin is not installed, install the `progress` extra: pip install yamabe-flow[progress]"
        )

    if alive_bar is None or not enabled or not sys.stdout.isatty():
        yield _noop
        return

    with alive_bar(total, title=title, **options) as bar:
        yield bar
