from loguru import logger

from src.errors import MtsError
from src.utils import configure_logging

from .commands import COMMANDS
from .config import RunConfig, resolve_config
from .parser import build_parser
from .pipeline import MtsnePipeline

CONTROL_KEYS = {"command", "config", "verbose", "quiet"}


def main(argv=None):
    """Parse `argv`, run the subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else "WARNING" if args.quiet else "INFO")

    try:
        cli = {key: value for key, value in vars(args).items() if key not in CONTROL_KEYS}
        config = resolve_config(cli, args.config)
        config.validate(needs_input=args.command != "render")
        return COMMANDS[args.command](config, progress=not args.quiet)
    except MtsError as e:
        where = getattr(e, "stage", args.command)
        logger.error(f"{args.command} failed during {where}: {e}")
        return e.exit_code
    except Exception as e:
        logger.exception(f"An unexpected error occurred: {e}")
        return 1
