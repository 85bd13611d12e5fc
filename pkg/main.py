import argparse
import sys
from typing import List, Optional

from src.cli.commands import COMMANDS
from src.cli.config import load_spec
from src.errors import NscrError
from src.utils.xlogging import get_logger

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nscr",
        allow_abbrev=False,
        description="Non-negative sparse and collaborative representation experiments",
        epilog="Any config key can be overridden with --key value (dashes or underscores).",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="plain-text config file with `key = value` lines")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args, flags = parser.parse_known_args(argv)

    try:
        spec = load_spec(args.config, flags)
        logger.info(f"=== nscr {args.command} on {spec.dataset} ===")
        COMMANDS[args.command](spec)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 1
    except NscrError as e:
        logger.error(f"{args.command} failed: {e}")
        return 1
    except Exception as e:
        logger.error(f"{args.command} crashed: {e}", exc=e)
        return 1

    logger.info(f"=== nscr {args.command} done ===")
    return 0


if __name__ == "__main__":
    sys.exit(main())
