import math

try:
    from colorama import Fore, Back, Style

    COLOR_SUPPORTED = True
except ModuleNotFoundError:
    Fore = Back = Style = None
    COLOR_SUPPORTED = False


#: Foreground colour tags, e.g. [red]...[/]
rule_colors = {}

#: Background colour tags, e.g. [bg red]...[/]
bg_colors = {}

#: Style tags, e.g. [b]...[/]
rule_styles = {}

if COLOR_SUPPORTED:
    rule_colors = {
        "red": Fore.RED,
        "blue": Fore.BLUE,
        "green": Fore.GREEN,
        "black": Fore.BLACK,
        "cyan": Fore.CYAN,
        "magenta": Fore.MAGENTA,
        "yellow": Fore.YELLOW,
        "white": Fore.WHITE,
        "reset": Fore.RESET,
    }

    bg_colors = {
        "red": Back.RED,
        "blue": Back.BLUE,
        "green": Back.GREEN,
        "black": Back.BLACK,
        "cyan": Back.CYAN,
        "magenta": Back.MAGENTA,
        "yellow": Back.YELLOW,
        "white": Back.WHITE,
        "reset": Back.RESET,
    }

    rule_styles = {
        "bold": Style.BRIGHT,
        "dim": Style.DIM,
        # Aliases
        "b": Style.BRIGHT,
    }

all_tags = [
    #: colors
    "red",
    "blue",
    "green",
    "black",
    "cyan",
    "magenta",
    "yellow",
    "white",
    "reset",
    #: background
    "bg",
    #: styles
    "b",
    "bold",
    "dim",
]


#: Floor on the nondegeneracy quadratic, in units of length^-2 after the
#: four radii of a tetrahedron are rescaled to geometric mean 1.
Q_MIN = 1e-12

#: Cosines within this distance outside [-1, 1] are clamped.
CLAMP_TOL = 1e-9

#: Solid angle of the regular tetrahedron, 3 arccos(1/3) - pi.
REGULAR_SOLID_ANGLE = 3.0 * math.acos(1.0 / 3.0) - math.pi

#: Relative base step of the finite-difference oracles and its floor. The
#: step of a tetrahedron is further capped at FD_CONDITION times Q / (sum 1/r)^2.
FD_STEP = 1e-3
FD_STEP_FLOOR = 1e-9
FD_CONDITION = 0.05

#: Significant digits used whenever a real is written to a file.
FLOAT_FORMAT = ".17g"
