from .progress import progressbar
from .table import Table

__all__ = ["Table", "progressbar"]
