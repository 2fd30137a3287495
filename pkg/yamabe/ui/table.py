from typing import Any
from typing import List
from typing import Optional
from typing import Sequence

from yamabe.errors import PluginError

try:
    from tabulate import tabulate

except ModuleNotFoundError:
    tabulate = None


class Table:
    """
    A table wrapper for `tabulate`.

    Parameters:
    ---

        headers (List[str]):
            Column headers. Can be None and set later with `add_header`.

        rows (List[List[Any]]):
            Initial rows. Use `add_row` for adding a row individually.

        type (str):
            The `tabulate` table format.

    Example:
    ---
        >>> table = Table(headers=['test', 'max defect'], type='plain')
        >>> table.add_row(['schlafli_residual', 1e-14])
        >>> print(table.render()) #: or print(table())  # doctest: +SKIP

    """

    def __init__(
        self,
        headers: Optional[List[str]] = None,
        rows: Optional[List[List[Any]]] = None,
        type: Optional[str] = "simple",
    ):

        self.__headers = list(headers or [])
        self.__rows = [list(r) for r in rows or []]
        self.__type = type

    def add_row(self, row: Sequence[Any]):
        self.__rows.append(list(row))

    def add_header(self, header: str):
        self.__headers.append(header)

    def __len__(self):
        return len(self.__rows)

    def render(self) -> str:
        """
        Render the table to a string.
        """

        if tabulate is None:
            raise PluginError("tabulate is not installed, reinstall yamabe-flow with its dependencies")

        return tabulate(self.__rows, headers=self.__headers, tablefmt=self.__type)

    def __call__(self) -> str:
        return self.render()
