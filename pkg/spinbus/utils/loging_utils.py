import logging

LOGGING_FORMAT: str = (
    "%(asctime)s | %(levelname)s | %(name)s | %(filename)s:%(lineno)d | %(message)s"
)


def configure_logging(level: str | int = logging.INFO, verbose: bool = False) -> None:
    """Install the shared log format on the root logger.

    Safe to call repeatedly; later calls only adjust the level.
    """
    root = logging.getLogger()
    resolved = logging.DEBUG if verbose else level
    if not any(getattr(h, "_spinbus", False) for h in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOGGING_FORMAT))
        handler._spinbus = True  # type: ignore[attr-defined]
        root.addHandler(handler)
    root.setLevel(resolved)
