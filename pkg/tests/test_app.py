import io
import logging
from typing import Optional

import pytest

from yamabe import print as yprint
from yamabe.app import App
from yamabe.app import configure_logging
from yamabe.command import Command
from yamabe.errors import InputError
from yamabe.errors import ParserExit
from yamabe.errors import PluginError
from yamabe.errors import TagNotFound
from yamabe.errors import UsageError
from yamabe.parser import Parser
from yamabe.print import ColorHandler
from yamabe.print import parse_color
from yamabe.ui import Table
from yamabe.ui import progressbar
from yamabe.utils import ParamOption
from yamabe.utils import convert_option_to_string
from yamabe.utils import convert_param_to_option
from yamabe.utils import create_bool_option
from yamabe.utils import unwrap_optional


@pytest.fixture
def app():
    app = App("demo", description="a demo")
    calls = []

    @app.command(option_help={"dt": "time step"})
    def flow(facets: str, dt: float = 0.01, steps: int = 3, normalize: Optional[bool] = None, out: Optional[str] = None):
        """Run the flow

        More text that is not part of the summary.
        """
        calls.append(dict(facets=facets, dt=dt, steps=steps, normalize=normalize, out=out))

    @app.command(name="sample_size", aliases=("s",))
    def sample(n: int = 1):
        return 7 if n > 1 else 0

    app.calls = calls
    return app


def test_options_from_signature(app):
    assert app.run(["flow", "--facets", "5cell", "--dt", "0.5", "--steps", "4", "--out", "x.csv"]) == 0
    assert app.calls[-1] == dict(facets="5cell", dt=0.5, steps=4, normalize=None, out="x.csv")

    app.run(["flow", "--facets", "5cell"])
    assert app.calls[-1] == dict(facets="5cell", dt=0.01, steps=3, normalize=None, out=None)


def test_bool_pairs(app):
    app.run(["flow", "--facets", "a", "--normalize"])
    assert app.calls[-1]["normalize"] is True

    app.run(["flow", "--facets", "a", "--no-normalize"])
    assert app.calls[-1]["normalize"] is False


def test_required_option(app, capsys):
    assert app.run(["flow"]) == 1
    assert "--facets is required" in capsys.readouterr().err

    with pytest.raises(UsageError):
        app.invoke(["flow"])


def test_bad_values_and_positionals(app, capsys):
    assert app.run(["flow", "--facets", "a", "--steps", "many"]) == 1
    assert app.run(["flow", "--facets", "a", "stray"]) == 1
    assert app.run(["flow", "--unknown"]) == 1


def test_names_aliases_and_exit_codes(app):
    assert [list(c) for c in app.commands] == [["flow"], ["sample-size"]]
    assert app.commands[0]["flow"] == "Run the flow"

    assert app.run(["sample-size", "-n", "2"]) == 7
    assert app.run(["s"]) == 0


def test_help_exits_cleanly(app, capsys):
    assert app.run(["--help"]) == 0
    assert "sample-size (s)" in capsys.readouterr().out

    assert app.run(["flow", "--help"]) == 0
    out = capsys.readouterr().out
    assert "--dt=FLOAT" in out
    assert "time step" in out
    assert "(required)" in out

    assert app.run(["help", "nope"]) == 1


def test_required_help_text(capsys):
    app = App("demo")

    @app.command(option_help={"facets": "facet list"})
    def validate(facets: str, seed: int):
        pass

    assert app.run(["validate", "--help"]) == 0
    out = capsys.readouterr().out
    assert "facet list (required)" in out
    assert "--seed=INTEGER" in out
    assert out.count("(required)") == 2


def test_registries_are_per_app():
    first, second = App("a"), App("b")

    @first.command()
    def only_here():
        pass

    assert first.commands == [{"only-here": None}]
    assert second.commands == []

    first.remove_command("only-here")
    assert first.commands == []


def test_errors_map_to_exit_codes(capsys):
    app = App("demo")

    @app.command()
    def bad_input():
        raise InputError("no such file")

    @app.command()
    def missing():
        open("/nonexistent/definitely/not/here")

    assert app.run(["bad-input"]) == 1
    assert "error: no such file" in capsys.readouterr().err
    assert app.run(["missing"]) == 1


def test_parser_commands():
    flow = Command("flow", help="Run the flow", aliases=("f",))
    flow.add_option("--dt", type=float)
    parser = Parser(commands=[flow], prog="yamabe")

    options, command, command_opt, args = parser.parse_args(["f", "--dt", "0.1", "left"])
    assert command is flow
    assert command_opt.dt == 0.1
    assert args == ["left"]
    assert command.parser.prog == "yamabe flow"

    assert parser.command_for_name("help") is parser.help_command
    assert parser.command_for_name("?") is parser.help_command
    assert parser.command_for_name("nope") is None

    with pytest.raises(TypeError):
        parser.add_command("flow")

    with pytest.raises(ParserExit):
        parser.parse_args([])

    parser.remove_command("flow")
    assert parser.all_commands == [parser.help_command]


def test_utils():
    assert convert_param_to_option("max_halvings") == "--max-halvings"
    assert convert_param_to_option("v") == "-v"
    assert convert_option_to_string("--t-max") == "t-max"
    assert create_bool_option("--normalize") == ("--normalize", "--no-normalize")

    assert unwrap_optional(Optional[float]) is float
    assert unwrap_optional(int) is int

    option = ParamOption("--dt", default=0.1, _type=Optional[float], dest="dt")
    assert option.to_dict["metavar"] == "FLOAT"
    assert not option.is_flag

    flag = ParamOption("--normalize", _type=bool, dest="normalize")
    assert flag.is_flag
    assert flag.metavar is None


def test_table():
    table = Table(headers=["test", "result"], rows=[["schlafli_residual", "ok"]])
    table.add_row(["pythagoras", "ok"])

    text = table()
    assert len(table) == 2
    assert "test" in text
    assert "pythagoras" in text
    assert text == table.render()


def test_table_without_tabulate(monkeypatch):
    monkeypatch.setattr("yamabe.ui.table.tabulate", None)

    table = Table(headers=["a", "bb"])
    table.add_row([1, 2.5])

    with pytest.raises(PluginError):
        table.render()


def test_progressbar_fallbacks(monkeypatch):
    with progressbar(3, "demo", enabled=False) as bar:
        for _ in range(3):
            bar()

    monkeypatch.setattr("yamabe.ui.progress.alive_bar", None)
    with progressbar(3, "demo") as bar:
        bar()

    with pytest.raises(PluginError):
        with progressbar(3, "demo", required=True):
            pass


def test_print_strips_tags_when_not_a_terminal():
    stream = io.StringIO()
    yprint("[red]error[/]: [b]bad[/] [1, 2]", file=stream)

    assert stream.getvalue() == "error: bad [1, 2]\n"
    assert parse_color("[green]ok[/green]", strip=True) == "ok"


def test_unknown_background():
    pytest.importorskip("colorama")

    with pytest.raises(TagNotFound):
        parse_color("[bg purple]x[/]")


def test_configure_logging():
    stream = io.StringIO()

    logger = configure_logging(verbose=True, stream=stream)
    assert logger.level == logging.DEBUG
    assert sum(isinstance(h, ColorHandler) for h in logger.handlers) == 1

    configure_logging(quiet=True)
    assert logger.level == logging.ERROR
    assert sum(isinstance(h, ColorHandler) for h in logger.handlers) == 1

    configure_logging()
    assert logger.level == logging.WARNING


def test_color_handler():
    stream = io.StringIO()
    logger = logging.getLogger("yamabe.test_color_handler")
    logger.propagate = False
    logger.addHandler(ColorHandler(stream))
    logger.setLevel(logging.INFO)

    logger.info("flow started: %d vertices", 5)

    assert stream.getvalue() == "info: flow started: 5 vertices\n"
