"""
Situation Tracking Harness - Main Entry Point
Sets up logging and environment, then dispatches to the command line
"""

import os
import sys
import logging

# Add src to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# Load environment variables
from src.env_loader import init_env, get as env_get
init_env()

from src.utils.main import main


def setup_logging():
    """Configure root logging from SITTRACK_LOG_LEVEL and SITTRACK_LOG_FILE"""
    handlers = [logging.StreamHandler()]
    log_file = env_get("SITTRACK_LOG_FILE")
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=env_get("SITTRACK_LOG_LEVEL", "INFO").upper(),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


if __name__ == "__main__":
    setup_logging()
    sys.exit(main())
