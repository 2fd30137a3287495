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

import optparse
from typing import Optional
from typing import Tuple

from .errors import ParserExit
from .errors import UsageError


class CommandOptionParser(optparse.OptionParser):
    """
    An `optparse.OptionParser` that raises instead of calling `sys.exit`,
    so that `App.run` can turn every outcome into an exit code.
    """

    def __init__(self, *args, **options):
        options.setdefault("usage", "%prog [OPTIONS]")
        super(CommandOptionParser, self).__init__(*args, **options)

    def exit(self, status: int = 0, msg: Optional[str] = None):
        raise ParserExit(status, msg)

    def error(self, msg: str):
        raise UsageError("%s: %s" % (self.get_prog_name(), msg))


class Command:
    """
    A sub command. Every command owns a parser for its own options.

    Parameters:
    ---

        name (str):
            The name of the command

        usage (str):
            The usage format for the command

        aliases (tuple):
            Aliases of the command.

        help (str):
            The help for the command.

    Example:
    ---

        >>> flow = Command('flow', help="Run the flow", aliases=('f',))
        >>> option = flow.add_option('--dt', type=float)

    """

    def __init__(
        self,
        name: str,
        usage: Optional[str] = None,
        aliases: Optional[Tuple[str, ...]] = None,
        help: Optional[str] = None,
    ):
        self.name = name
        self.usage = usage
        self.aliases = tuple(aliases or ())
        self.help = help or "This command accepts options"
        self.parser = CommandOptionParser(usage=usage, add_help_option=True)

    def add_option(self, *args, **kwargs):
        return self.parser.add_option(*args, **kwargs)
