"""
Logging setup.

Library modules log through logfire directly; this only decides where the
records go. Nothing is sent remotely unless a logfire token is configured.
"""

import logfire

VERBOSITY_LEVELS = {0: "warn", 1: "info", 2: "debug"}


def configure_logging(verbosity: int = 0, service_name: str = "fxsearch") -> None:
    """
    Configure logfire once per process.

    Args:
        verbosity: -1 silences the console; 0 warnings, 1 info, 2 debug
        service_name: Service name attached to every record
    """
    console: logfire.ConsoleOptions | bool
    if verbosity < 0:
        console = False
    else:
        level = VERBOSITY_LEVELS[min(verbosity, 2)]
        console = logfire.ConsoleOptions(min_log_level=level, verbose=verbosity >= 2)
    logfire.configure(
        service_name=service_name,
        send_to_logfire="if-token-present",
        console=console,
        inspect_arguments=False,
    )
