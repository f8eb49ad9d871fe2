import logging
import sys
from threading import Lock

_BOOTSTRAP_LOCK = Lock()
_BOOTSTRAPPED = False

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def initialize_application(verbose: bool = False, force: bool = False) -> None:
    global _BOOTSTRAPPED

    if _BOOTSTRAPPED and not force:
        return

    with _BOOTSTRAP_LOCK:
        if _BOOTSTRAPPED and not force:
            return

        root = logging.getLogger("pseudoquandle_app")
        for handler in list(root.handlers):
            root.removeHandler(handler)
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.DEBUG if verbose else logging.WARNING)
        root.propagate = False
        _BOOTSTRAPPED = True
