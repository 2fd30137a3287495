"""
Helpers that turn function parameters into `optparse` options.
"""

import inspect
import typing
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

__all__ = [
    "convert_param_to_option",
    "convert_option_to_string",
    "create_bool_option",
    "unwrap_optional",
    "ParamOption",
    "CommandDict",
]


def convert_param_to_option(param: str) -> str:
    """
    `max_halvings` becomes `--max-halvings`, a single letter `v` becomes `-v`.
    """

    param = param.replace("_", "-")
    if len(param) > 1:
        return "--%s" % (param)

    return "-%s" % (param)


def convert_option_to_string(option: str) -> str:
    return option.lstrip("-")


def create_bool_option(option: str) -> Tuple[str, str]:
    """
    Create the `--name` / `--no-name` pair of a boolean option.
    """

    option = convert_option_to_string(option)
    return ("--%s" % (option), "--no-%s" % (option))


def unwrap_optional(annotation: Any) -> Any:
    """Optional[float] -> float; anything else is returned unchanged."""

    if typing.get_origin(annotation) is typing.Union:
        args = [a for a in typing.get_args(annotation) if a is not type(None)]
        if len(args) == 1:
            return args[0]

    return annotation


class ParamOption:
    """
    The option generated for one parameter of a command function.

    A parameter without a default is required. Boolean parameters produce a
    `--x` / `--no-x` pair sharing one destination, so a default of None
    means "not given".
    """

    __metavar_mapping = {
        str: "STRING",
        int: "INTEGER",
        float: "FLOAT",
    }

    def __init__(
        self,
        name: str,
        required: bool = False,
        default: Any = None,
        _type: Any = None,
        dest: Optional[str] = None,
        help: Optional[str] = None,
    ):

        self.name = name
        self.required = required
        self.default = default
        self.type = unwrap_optional(_type)
        self.dest = dest
        self.help = help
        self.is_flag = self.type is bool

        if self.is_flag:
            self.metavar = None
            self.type = None

        else:
            self.type = self.type if self.type in self.__metavar_mapping else str
            self.metavar = self.__metavar_mapping[self.type]

    @classmethod
    def from_parameter(cls, param: inspect.Parameter, annotation: Any, help: Optional[str] = None) -> "ParamOption":
        required = param.default is inspect.Parameter.empty
        return cls(
            convert_param_to_option(param.name),
            required,
            None if required else param.default,
            None if annotation is inspect.Parameter.empty else annotation,
            param.name,
            help,
        )

    def add_to(self, parser):
        """Register the option (or the flag pair) on an `OptionParser`."""

        help = self.help
        if self.required:
            help = "%s (required)" % (help) if help else "(required)"

        if self.is_flag:
            on, off = create_bool_option(self.name)
            parser.add_option(on, dest=self.dest, action="store_true", default=self.default, help=help)
            parser.add_option(off, dest=self.dest, action="store_false", default=self.default)

        else:
            parser.add_option(
                self.name,
                dest=self.dest,
                type=self.type,
                default=self.default,
                metavar=self.metavar,
                help=help,
            )

    @property
    def to_dict(self):
        return {
            "name": self.name,
            "dest": self.dest,
            "metavar": self.metavar,
            "required": self.required,
            "default": self.default,
            "type": self.type,
            "flag": self.is_flag,
        }


class CommandDict:
    """
    A registered command: its name, help text, aliases, the options made
    from its parameters and the function to call.
    """

    def __init__(
        self,
        name: str,
        usage: Optional[str] = None,
        help: Optional[str] = None,
        aliases: Tuple[str, ...] = (),
        opt: Optional[List[ParamOption]] = None,
        func: Optional[Callable[..., Any]] = None,
    ):

        self.name = name
        self.usage = usage
        self.help = help
        self.aliases = aliases
        self.opt = opt or []
        self.func = func

    @property
    def required(self) -> List[str]:
        return [o.dest for o in self.opt if o.required]

    @property
    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "usage": self.usage,
            "help": self.help,
            "aliases": self.aliases,
            "options": [o.to_dict for o in self.opt],
            "func": self.func,
        }
