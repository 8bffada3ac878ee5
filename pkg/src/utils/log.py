"""
src/utils/log.py
Tagged console logging, switched by the `logging` section of config.yaml.
"""

import sys

_settings = {"enabled": False, "verbose": False}


def configure(config) -> None:
    """Read logging.enabled / logging.verbose from a Config."""
    section = config.section("logging")
    _settings["enabled"] = bool(section.get("enabled", False))
    _settings["verbose"] = bool(section.get("verbose", False))


def set_logging(enabled: bool = True, verbose: bool = False) -> None:
    _settings["enabled"] = enabled
    _settings["verbose"] = verbose


def log(tag: str, message: str) -> None:
    if _settings["enabled"]:
        print(f"[{tag}] {message}", file=sys.stderr)


def debug(tag: str, message: str) -> None:
    if _settings["enabled"] and _settings["verbose"]:
        print(f"[{tag}] {message}", file=sys.stderr)
