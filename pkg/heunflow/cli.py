#!/usr/bin/env python3
# heunflow

import os
import sys
import asyncio
import argparse
import logging
from importlib import metadata
from concurrent.futures import ThreadPoolExecutor

from colorama import Fore, Style, init

from .lib.errors import (
    HeunFlowCLIException,
    HeunFlowConfigException,
    HeunFlowConvergenceException,
    HeunFlowFitException,
    HeunFlowParamsException,
    HeunFlowResultException,
    HeunFlowSeriesException,
)
from .lib.logging import setup_logging, debug_logging, silent_logging
from .lib.loader import load_defaults, load_config
from .lib.validators import validate_positive_int, parse_bool
from .lib.writers import FORMATS, open_output

from heunflow.base import get_all_modules

init(autoreset=True)

modules = get_all_modules()
log = logging.getLogger("heunflow")

USAGE_ERRORS = (HeunFlowCLIException, HeunFlowParamsException, HeunFlowConfigException, HeunFlowSeriesException)
NUMERICAL_ERRORS = (HeunFlowConvergenceException, HeunFlowFitException, HeunFlowResultException)


class CustomArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        log.error(message)
        raise HeunFlowCLIException(message)


def print_version():
    try:
        version_str = metadata.version("heunflow")
    except metadata.PackageNotFoundError:
        version_str = "Unknown (Running w/poetry?)"
    print(f"Version - {version_str}\n", file=sys.stderr)


def build_parser(defaults):
    parser = CustomArgumentParser(
        description="Scaling functions of the singular sigma-model spectral problem and the D_N TBA"
    )
    parser.add_argument("-d", "--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("-s", "--silent", action="store_true", help="Only show results, no banner or progress")
    parser.add_argument(
        "-l", "--list-modules", action="store_true", help="List available commands and their descriptions."
    )
    parser.add_argument("-c", "--config", help="key=value run-config file; keys are long option names")
    parser.add_argument("-o", "--output", help="Write results to this file instead of stdout")
    parser.add_argument(
        "-f", "--format", choices=FORMATS, help="Output format (default: json for asympt, csv otherwise)"
    )
    parser.add_argument(
        "-t",
        "--threads",
        type=validate_positive_int,
        default=defaults["threads"],
        help="Worker threads for curve scans (default: one per CPU, HEUNFLOW_THREADS overrides)",
    )

    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subcommands = {}
    for ModuleClass in modules:
        sub = subparsers.add_parser(
            ModuleClass.name, help=ModuleClass.description, description=ModuleClass.description
        )
        ModuleClass.add_arguments(sub, defaults)
        subcommands[ModuleClass.name] = sub
    return parser, subcommands


def _config_value(action, key, value):
    if action.nargs == 0:
        try:
            return parse_bool(value)
        except argparse.ArgumentTypeError as e:
            raise HeunFlowConfigException(f"config key [{key}]: {e}")
    if action.nargs in ("+", "*"):
        parts = value.replace(",", " ").split()
        try:
            return [action.type(p) if action.type else p for p in parts]
        except argparse.ArgumentTypeError as e:
            raise HeunFlowConfigException(f"config key [{key}]: {e}")
    if action.choices is not None and value not in action.choices:
        raise HeunFlowConfigException(f"config key [{key}] must be one of: {', '.join(action.choices)}")
    # plain strings go through the action's type= validator at parse time
    return value


def apply_config(parser, subparser, entries):
    """Feed run-config entries in as parser defaults, so command-line flags still win."""
    for key, value in entries.items():
        for target in (subparser, parser):
            if target is None:
                continue
            action = next((a for a in target._actions if a.dest == key and a.option_strings), None)
            if action is not None:
                break
        else:
            raise HeunFlowConfigException(f"unknown config key [{key}]")
        if key == "config":
            raise HeunFlowConfigException("config files cannot include other config files")
        action.required = False
        target.set_defaults(**{key: _config_value(action, key, value)})
        log.debug(f"config: {key} = {value}")


def resolve_threads(requested):
    env = os.environ.get("HEUNFLOW_THREADS")
    if env is None:
        return requested
    try:
        return validate_positive_int(env)
    except argparse.ArgumentTypeError as e:
        raise HeunFlowConfigException(f"HEUNFLOW_THREADS: {e}")


async def execute_module(ModuleClass, settings, defaults, output=None, fmt=None):
    module_instance = ModuleClass(settings, defaults=defaults, cli=True)
    log.info(f"Starting [{module_instance.name}] module")
    try:
        if await module_instance.dispatch():
            with open_output(output) as stream:
                module_instance.emit(stream, fmt or module_instance.default_format)
    finally:
        await module_instance.cleanup()
    return module_instance


async def _main():
    setup_logging()
    defaults = load_defaults()
    parser, subcommands = build_parser(defaults)
    argv = sys.argv[1:]

    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("-c", "--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        command = next((a for a in argv if a in subcommands), None)
        apply_config(parser, subcommands.get(command), load_config(known.config))

    args = parser.parse_args(argv)

    if args.silent:
        silent_logging()
    else:
        print(f"{Fore.GREEN}{ascii_art_banner}{Style.RESET_ALL}", file=sys.stderr)
        print_version()

    debug_logging(args.debug)

    if args.list_modules:
        print("Available Modules:")
        for m in modules:
            print(f"[{m.name}] - {m.description}")
        return

    if not args.command:
        parser.error("a command is required (or -l to list modules)")

    threads = resolve_threads(args.threads)
    asyncio.get_running_loop().set_default_executor(ThreadPoolExecutor(max_workers=threads))
    log.debug(f"Using [{threads}] worker thread(s)")

    ModuleClass = next(m for m in modules if m.name == args.command)
    await execute_module(ModuleClass, vars(args), defaults, output=args.output, fmt=args.format)


def main():
    try:
        asyncio.run(_main())
    except asyncio.CancelledError:
        log.error("Got asyncio.CancelledError")

    except HeunFlowCLIException:
        sys.exit(2)

    except USAGE_ERRORS as e:
        log.error(str(e))
        sys.exit(2)

    except NUMERICAL_ERRORS as e:
        log.error(str(e))
        sys.exit(3)

    except KeyboardInterrupt:
        sys.exit(1)


ascii_art_banner = r"""
  _                      __ _
 | |__   ___ _   _ _ __ / _| | _____      __
 | '_ \ / _ \ | | | '_ \ |_| |/ _ \ \ /\ / /
 | | | |  __/ |_| | | | |  _| | (_) \ V  V /
 |_| |_|\___|\__,_|_| |_|_| |_|\___/ \_/\_/
"""


if __name__ == "__main__":
    main()
