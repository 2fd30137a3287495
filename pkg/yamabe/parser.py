import optparse
import textwrap
from typing import List
from typing import Optional
from typing import Tuple

from .command import Command
from .command import CommandOptionParser


class Parser(CommandOptionParser):
    """
    The root parser: global options followed by one sub command.
    It is pretty similar with OptionParser, the only difference is the
    commands.

    Parameters:
    ---

        commands (list):
            A list of `Command`

        **options (dict):
            Passed on to `optparse.OptionParser`

    Example:
    ---

        >>> flow = Command('flow', help="Run the flow")
        >>> option = flow.add_option('--dt', type=float)
        >>> parser = Parser(commands=[flow], prog="yamabe")
        >>> options, command, command_opt, args = parser.parse_args(['flow', '--dt', '0.1'])
        >>> command_opt.dt
        0.1

    """

    def __init__(self, commands: Optional[List[Command]] = None, *args, **options):

        self.commands = list(commands or [])
        self.help_command = Command("help", help="Show the help of a command and exit", aliases=("?",))

        options.setdefault("usage", "%prog [OPTIONS] COMMAND [ARGS..]\n%prog help COMMAND")
        super(Parser, self).__init__(*args, **options)

        self.disable_interspersed_args()

    def add_command(self, cmd: Command):
        """
        Add a command.

        Parameters
        ---
            cmd (Command):
                The command to be added.
        """
        if not isinstance(cmd, Command):
            raise TypeError("{} is not an instance of Command".format(cmd))

        self.commands.append(cmd)

    def remove_command(self, name: str):
        self.commands = [c for c in self.commands if c.name != name]

    @property
    def all_commands(self) -> List[Command]:
        return self.commands + [self.help_command]

    @staticmethod
    def display_name(command: Command) -> str:
        if not command.aliases:
            return command.name

        return "%s (%s)" % (command.name, ", ".join(command.aliases))

    def format_help(self, formatter=None) -> str:
        """The optparse help followed by a `Commands` section."""

        formatter = formatter or self.formatter
        text = optparse.OptionParser.format_help(self, formatter)

        entries = [(self.display_name(c), c.help) for c in self.all_commands]
        column = min(max(len(name) for name, _ in entries) + 4, formatter.max_help_position)
        wrap = max(formatter.width - column, 20)

        lines = ["\n", formatter.format_heading("Commands")]
        for name, help in entries:
            wrapped = textwrap.wrap(help, wrap) or [""]

            #: Names too long for the column get a line of their own.
            if len(name) + 4 > column:
                lines.append("  %s\n" % (name))
                lines.append("%s%s\n" % (" " * column, wrapped[0]))
            else:
                lines.append("  %-*s%s\n" % (column - 2, name, wrapped[0]))

            lines.extend("%s%s\n" % (" " * column, line) for line in wrapped[1:])

        return text + "".join(lines)

    def command_for_name(self, name: str) -> Optional[Command]:
        """
        The command matching `name` or one of its aliases, None if there is
        no such command.
        """

        for command in self.all_commands:
            if name == command.name or name in command.aliases:
                return command

        return None

    def parse_args(self, _args=None, _value=None) -> Tuple[optparse.Values, Command, optparse.Values, List[str]]:
        """
        Just like `OptionParser.parse_args` but for a command line with a
        sub command. Returns

        - options: the options passed to the root parser
        - command: the command that was invoked
        - command_opt: the options parsed by the command parser
        - command_args: the positional arguments left after the command

        Printing help raises `ParserExit(0)`.
        """

        for command in self.all_commands:
            command.parser.prog = "%s %s" % (self.get_prog_name(), command.name)

        options, args = optparse.OptionParser.parse_args(self, _args, _value)

        if not args:
            self.print_help()
            self.exit()

        command_name = args.pop(0)
        command = self.command_for_name(command_name)

        if not command:
            self.error("Unknown command: {}".format(command_name))

        command_opt, command_args = command.parser.parse_args(args)

        if command is self.help_command:
            if command_args:
                target = self.command_for_name(command_args[0])
                if not target:
                    self.error("Unknown command: {}".format(command_args[0]))
                target.parser.print_help()

            else:
                self.print_help()

            self.exit()

        return options, command, command_opt, command_args
