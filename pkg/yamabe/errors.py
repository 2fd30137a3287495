from typing import Optional
from typing import Tuple


class YamabeException(Exception):
    def __init__(self, msg=None):
        if msg == None:
            msg = "Something went wrong with yamabe"

        super().__init__(msg)


class InputError(YamabeException):
    """
    Raised for anything wrong with user supplied data. The command line
    maps it to exit code 1.
    """

    def __init__(self, msg="Invalid input"):
        super().__init__(msg)


class FacetParseError(InputError):
    def __init__(self, msg="Malformed facet list", line: Optional[int] = None, token: Optional[str] = None):
        self.line = line
        self.token = token

        if line is not None:
            msg = "line %d: %s" % (line, msg)

        super().__init__(msg)


class UnknownVertex(InputError):
    def __init__(self, vertex=None, msg=None):
        self.vertex = vertex
        super().__init__(msg or "Unknown vertex id: %s" % (vertex,))


class InvalidRadius(InputError):
    def __init__(self, vertex=None, value=None, msg=None):
        self.vertex = vertex
        self.value = value
        super().__init__(
            msg or "Radius must be positive and finite (vertex %s, got %r)" % (vertex, value)
        )


class ConfigError(InputError):
    def __init__(self, msg="Invalid configuration", key: Optional[str] = None):
        self.key = key
        super().__init__(msg)


class UsageError(InputError):
    def __init__(self, msg="Invalid command line usage"):
        super().__init__(msg)


class ParserExit(YamabeException):
    """
    Raised by the parsers where `optparse` would call `sys.exit`.
    """

    def __init__(self, status: int = 0, msg=None):
        self.status = status
        super().__init__(msg or "Parser exited with status %d" % (status))


class GeometryError(YamabeException):
    def __init__(self, msg="Invalid geometric configuration"):
        super().__init__(msg)


class DegenerateTetrahedron(GeometryError):
    """
    A tetrahedron whose nondegeneracy quadratic is not above the floor, or a
    spherical triangle of face angles that cannot close up.

    Attributes:
    ---
        q (float):
            The offending value of Q (raw, in length^-2) when known.

        tet (tuple):
            The vertex ids of the tetrahedron when known.
    """

    def __init__(self, msg=None, q: Optional[float] = None, tet: Optional[Tuple[int, ...]] = None):
        self.q = q
        self.tet = tet

        if msg is None:
            msg = "Degenerate tetrahedron"
            if tet is not None:
                msg += " %s" % (list(tet),)
            if q is not None:
                msg += " (Q = %.17g)" % (q)

        super().__init__(msg)


class StepRejected(YamabeException):
    def __init__(self, msg=None, vertex: Optional[int] = None, tet: Optional[Tuple[int, ...]] = None, q: Optional[float] = None):
        self.vertex = vertex
        self.tet = tet
        self.q = q

        if msg is None:
            if tet is not None:
                msg = "Step rejected: tetrahedron %s degenerates" % (list(tet),)
            elif vertex is not None:
                msg = "Step rejected: radius of vertex %s is not positive" % (vertex,)
            else:
                msg = "Step rejected"

        super().__init__(msg)


class InvariantFailure(YamabeException):
    """
    An internal postcondition failed. The command line maps it to exit code 2.
    """

    def __init__(self, msg="Internal invariant failed"):
        super().__init__(msg)


class PluginError(YamabeException):
    def __init__(self, msg="Plugin not installed"):
        super().__init__(msg)


class TagNotFound(YamabeException):
    """
    Used for parsing colour tags in `yamabe.print`
    """

    def __init__(self, msg="Tag is not defined"):
        super().__init__(msg)
