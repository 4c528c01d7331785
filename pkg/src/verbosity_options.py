import logging

VERBOSITY_OPTIONS = {
    1: "Summary Only",
    2: "Stage-by-Stage Results",
    3: "Debug (Everything)"
}

LOG_LEVELS = {
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG
}

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def log_level_for(verbosity):
    ### Unknown levels fall back to Summary Only ###
    return LOG_LEVELS.get(verbosity, LOG_LEVELS[1])


def configure_logging(verbosity=1, stream=None):
    level = log_level_for(verbosity)
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, "_coboundary", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._coboundary = True
    root.addHandler(handler)
    root.setLevel(level)
    return level
