import logging
import sys


def setup_logging(level: str = "INFO"):
    """
    Configures global logging for the whole laboratory.
    Logs to stdout and includes timestamps.
    """
    log_format = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=log_format,
        handlers=[logging.StreamHandler(sys.stdout)],
        force=True,
    )

    # joblib workers are chatty at INFO
    logging.getLogger("joblib").setLevel(logging.WARNING)
    logging.getLogger("numexpr").setLevel(logging.WARNING)

    logging.getLogger(__name__).info("Global logging configured.")
