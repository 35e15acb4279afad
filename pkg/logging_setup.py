# logging_setup.py
import logging
import logging.handlers
import os
import sys
from typing import Optional

from config import DEBUG, LOG_CONFIG


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None,
                  to_file: bool = True) -> bool:
    """
    Setup logging with rotating UTF-8 log files and a console handler.

    The console handler writes to stderr so that stdout stays free for
    completed streams and metrics.

    Args:
        level:   Level name overriding LOG_CONFIG['level'] (DEBUG=true in the env forces DEBUG)
        log_dir: Directory for log files (default LOG_CONFIG['dir'])
        to_file: False for console-only logging (tests, one-shot commands)

    Returns:
        True if file logging is active, False on console-only fallback
    """
    level = (level or ('DEBUG' if DEBUG else LOG_CONFIG['level'])).upper()
    log_dir = log_dir or LOG_CONFIG['dir']
    formatter = logging.Formatter(LOG_CONFIG['format'])

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)

    if not to_file:
        logging.basicConfig(
            level=getattr(logging, level, logging.INFO),
            handlers=[console_handler],
            force=True
        )
        return False

    try:
        os.makedirs(log_dir, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            os.path.join(log_dir, LOG_CONFIG['file']),
            maxBytes=LOG_CONFIG['max_size'],
            backupCount=LOG_CONFIG['backup_count'],
            mode='a',
            encoding='utf-8'
        )
        file_handler.setFormatter(formatter)

        logging.basicConfig(
            level=getattr(logging, level, logging.INFO),
            handlers=[file_handler, console_handler],
            force=True  # Force reconfiguration if already configured
        )

        error_handler = logging.handlers.RotatingFileHandler(
            os.path.join(log_dir, LOG_CONFIG['error_file']),
            maxBytes=LOG_CONFIG['max_size'],
            backupCount=LOG_CONFIG['backup_count'],
            encoding='utf-8'
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(formatter)
        logging.getLogger().addHandler(error_handler)

        return True
    except Exception as e:
        # Fallback to console logging only
        logging.basicConfig(
            level=getattr(logging, level, logging.INFO),
            handlers=[console_handler],
            force=True
        )
        logging.getLogger(__name__).warning(f"Could not setup file logging: {e}")
        return False
