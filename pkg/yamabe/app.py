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

import inspect
import logging
import sys
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import get_type_hints

from .command import Command
from .errors import InputError
from .errors import ParserExit
from .errors import UsageError
from .errors import YamabeException
from .parser import Parser
from .print import ColorHandler
from .print import print as _print
from .utils import CommandDict
from .utils import ParamOption

logger = logging.getLogger(__name__)

#: Exit codes returned by `App.run`
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


def configure_logging(verbose: bool = False, quiet: bool = False, stream=None) -> logging.Logger:
    """
    Attach a `ColorHandler` to the package logger once and set its level:
    DEBUG with `verbose`, ERROR with `quiet`, WARNING otherwise.
    """

    package = logging.getLogger("yamabe")
    if not any(isinstance(h, ColorHandler) for h in package.handlers):
        package.addHandler(ColorHandler(stream))

    if verbose:
        package.setLevel(logging.DEBUG)
    elif quiet:
        package.setLevel(logging.ERROR)
    else:
        package.setLevel(logging.WARNING)

    return package


class App:
    """
    The main application for the CLI. Commands are plain functions whose
    parameters become `--options`.

    Parameters:
    ---
        prog (str):
            The program name shown in usage lines.

        description (str):
            Shown at the top of the help.

    Example:
    ---

        >>> app = App("demo")
        >>> @app.command()
        ... def greet(name: str):
        ...     app.echo("hello, {}".format(name))
        >>> app.run(["greet", "--name", "world"])
        hello, world
        0

    """

    def __init__(self, prog: Optional[str] = None, description: Optional[str] = None):
        self.prog = prog
        self.description = description

        #: Registered commands by name, in registration order
        self.__commands: Dict[str, CommandDict] = {}

        #: Global options of the last `run`
        self.verbose = False
        self.quiet = False

    @property
    def commands(self) -> List[Dict[str, str]]:
        """
        All registered commands with their help.
        """
        return [{c.name: c.help} for c in self.__commands.values()]

    def echo(self, text: Any, err: bool = False):
        """
        Print through `yamabe.print`, with colour tags such as [red][/].

        Parameters:
        ---
            text (object):
                The value to be printed.

            err (bool):
                Write to stderr instead of stdout.
        """

        _print(text, file=sys.stderr if err else sys.stdout)

    def command(
        self,
        name: Optional[str] = None,
        usage: Optional[str] = None,
        aliases: Tuple[str, ...] = (),
        help: Optional[str] = None,
        option_help: Optional[Dict[str, str]] = None,
        func: Optional[Callable[..., Any]] = None,
    ):
        """
        A command decorator. The signature of the function defines the
        options: a parameter without default is required, `bool` parameters
        become `--x` / `--no-x` pairs and `Optional[T]` is read as T.

        Parameters:
        ---
            name (str):
                The name of the command, the function name by default.

            usage (str):
                The usage format of the command.

            aliases (tuple):
                A tuple of aliases of the command.

            help (str):
                The help of the command, the first docstring line by default.

            option_help (dict):
                Help text by parameter name.

        Example:
        ---

            >>> app = App()
            >>> @app.command(option_help={"dt": "time step"})
            ... def flow(dt: float = 0.01):
            ...     \"\"\"Run the flow\"\"\"
        """

        option_help = option_help or {}

        def deco(func):
            _name = (name or func.__name__).replace("_", "-")

            _help = help
            if not _help and func.__doc__:
                _help = func.__doc__.strip().splitlines()[0]

            signature = inspect.signature(func)
            type_hints = get_type_hints(func)

            params = [
                ParamOption.from_parameter(
                    param,
                    type_hints.get(param.name, param.annotation),
                    option_help.get(param.name),
                )
                for param in signature.parameters.values()
            ]

            self.__commands[_name] = CommandDict(_name, usage, _help, tuple(aliases), params, func)
            return func

        return deco(func) if func else deco

    def remove_command(self, name: str):
        self.__commands.pop(name, None)

    def build_parser(self) -> Parser:
        """A fresh root parser holding every registered command."""

        parser = Parser(prog=self.prog, description=self.description)
        parser.add_option("-v", "--verbose", action="store_true", default=False, help="debug logging")
        parser.add_option("-q", "--quiet", action="store_true", default=False, help="errors only")

        for entry in self.__commands.values():
            command = Command(entry.name, entry.usage, entry.aliases, entry.help)
            for option in entry.opt:
                option.add_to(command.parser)
            parser.add_command(command)

        return parser

    def invoke(self, argv: Optional[Sequence[str]] = None) -> int:
        """
        Parse `argv` and call the command. Exceptions propagate; `run` is
        the variant that maps them to exit codes.
        """

        parser = self.build_parser()
        options, command, command_opt, command_args = parser.parse_args(
            list(sys.argv[1:] if argv is None else argv)
        )

        self.verbose, self.quiet = options.verbose, options.quiet
        configure_logging(self.verbose, self.quiet)

        if command_args:
            raise UsageError("%s: unexpected arguments: %s" % (command.parser.get_prog_name(), " ".join(command_args)))

        entry = self.__commands[command.name]
        values = vars(command_opt)

        for dest in entry.required:
            if values.get(dest) is None:
                raise UsageError(
                    "%s: option --%s is required" % (command.parser.get_prog_name(), dest.replace("_", "-"))
                )

        status = entry.func(**{o.dest: values.get(o.dest) for o in entry.opt})
        return EXIT_OK if status is None else int(status)

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """
        Run the application and return the exit code: 0 on success, 1 for
        bad input or usage, 2 for internal failures.

        Example:
        ---

            >>> app = App()
            >>> app.run(["help"])  # doctest: +SKIP
        """

        try:
            return self.invoke(argv)

        except ParserExit as e:
            return e.status

        except InputError as e:
            self.echo("[red]error[/]: %s" % (e), err=True)
            return EXIT_INPUT

        except YamabeException as e:
            logger.debug("internal failure", exc_info=True)
            self.echo("[red]internal error[/]: %s" % (e), err=True)
            return EXIT_INTERNAL

        except OSError as e:
            self.echo("[red]error[/]: %s" % (e), err=True)
            return EXIT_INPUT
