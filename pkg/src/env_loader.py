"""
Environment Variable Loader
Loads configuration from a .env file with python-dotenv
"""

import os
import logging
from pathlib import Path
from typing import Optional

# Fall back to os.environ when dotenv is missing
try:
    from dotenv import load_dotenv
    DOTENV_AVAILABLE = True
except ImportError:
    DOTENV_AVAILABLE = False
    logging.warning("python-dotenv not installed. Only os.environ is used.")

logger = logging.getLogger(__name__)

SECRET_SUFFIXES = ("key", "token", "secret", "password")


def mask_value(key: str, value: Optional[str]) -> Optional[str]:
    """Mask values of secret-looking variables for logging"""
    if value and key.lower().endswith(SECRET_SUFFIXES):
        return value[:3] + "*" * (len(value) - 6) if len(value) > 6 else "***"
    return value


class EnvironmentLoader:
    """Loads and serves environment variables"""

    def __init__(self, env_file: Optional[str] = None):
        """
        Initialize Environment Loader

        Args:
            env_file: Path to the .env file (default: .env in the working directory)
        """
        if env_file is None:
            env_file = ".env"

        self.env_file = Path(env_file)
        self._load_env()

    def _load_env(self):
        """Load the .env file"""
        if DOTENV_AVAILABLE:
            if self.env_file.exists():
                # existing environment wins over the file
                load_dotenv(str(self.env_file), override=False)
                logger.info(f"✓ .env file loaded: {self.env_file}")
            else:
                logger.debug(f".env file not found: {self.env_file}")
        else:
            logger.debug("python-dotenv not available, using os.environ only")

    @staticmethod
    def get(key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
        """
        Get an environment variable

        Args:
            key: Variable name
            default: Value when unset
            required: Raise when unset

        Returns:
            Variable value

        Raises:
            ValueError: If required=True and the variable is unset
        """
        value = os.getenv(key, default)

        if value is None and required:
            raise ValueError(f"Required environment variable '{key}' is not set")

        logger.debug(f"Environment variable '{key}' = {mask_value(key, value)}")
        return value

    @staticmethod
    def get_bool(key: str, default: bool = False) -> bool:
        value = os.getenv(key, str(default)).lower()
        return value in ('true', '1', 'yes', 'on')

    @staticmethod
    def get_int(key: str, default: int = 0) -> int:
        """
        Get an integer environment variable

        Args:
            key: Variable name
            default: Value when unset or unparsable

        Returns:
            Integer value
        """
        try:
            return int(os.getenv(key, str(default)))
        except ValueError:
            logger.warning(f"Invalid integer for '{key}': {os.getenv(key)}")
            return default

    @staticmethod
    def get_float(key: str, default: float = 0.0) -> float:
        try:
            return float(os.getenv(key, str(default)))
        except ValueError:
            logger.warning(f"Invalid float for '{key}': {os.getenv(key)}")
            return default

    @staticmethod
    def get_list(key: str, default: Optional[list] = None) -> list:
        """
        Get a comma-separated list

        Args:
            key: Variable name
            default: List when unset

        Returns:
            List of stripped strings
        """
        if default is None:
            default = []

        value = os.getenv(key, "")
        if not value:
            return default

        return [item.strip() for item in value.split(",") if item.strip()]


# Global loader instance
_loader = None


def init_env(env_file: Optional[str] = None):
    """
    Initialize the global Environment Loader

    Args:
        env_file: Path to the .env file
    """
    global _loader
    _loader = EnvironmentLoader(env_file)


def get(key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
    """Wrapper for EnvironmentLoader.get()"""
    return EnvironmentLoader.get(key, default, required)


def get_bool(key: str, default: bool = False) -> bool:
    """Wrapper for EnvironmentLoader.get_bool()"""
    return EnvironmentLoader.get_bool(key, default)


def get_int(key: str, default: int = 0) -> int:
    """Wrapper for EnvironmentLoader.get_int()"""
    return EnvironmentLoader.get_int(key, default)


def get_float(key: str, default: float = 0.0) -> float:
    """Wrapper for EnvironmentLoader.get_float()"""
    return EnvironmentLoader.get_float(key, default)


def get_list(key: str, default: Optional[list] = None) -> list:
    """Wrapper for EnvironmentLoader.get_list()"""
    return EnvironmentLoader.get_list(key, default)


# Load .env on import
if DOTENV_AVAILABLE:
    init_env()
