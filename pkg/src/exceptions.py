"""
Exceptions Module
Every error the harness raises on purpose derives from HarnessError
"""


class HarnessError(Exception):
    """Base class for all harness errors"""


class ConfigError(HarnessError, ValueError):
    """Invalid environment, generation or run configuration"""


# Environment state machine

class OutOfRange(HarnessError, ValueError):
    """A box or key index outside the configured environment"""


class RepeatedTarget(HarnessError, ValueError):
    """A step targets a box already opened or a key already obtained"""


# Instance generation

class GeneratorExhausted(HarnessError, RuntimeError):
    """Token resampling gave up"""


class CountTooLarge(HarnessError, ValueError):
    """More steps requested than the environment has boxes or keys"""


class EmptyPool(HarnessError, ValueError):
    """Distractor pool has no sentences"""


# Scoring and protocols

class MismatchedQuery(HarnessError, ValueError):
    """Consecutive steps were queried over different state sets"""


class BadK(HarnessError, ValueError):
    """Compressed initialization k outside [1, len(steps) - 1]"""


class NoPreviousAnswer(HarnessError, ValueError):
    """Copy agent found no answer block in the prompt"""


# Persistence and reporting

class SchemaVersionError(HarnessError, ValueError):
    """Record written by an unknown schema version"""


class EmptyInput(HarnessError, ValueError):
    """Nothing to report on"""


# Model clients

class ClientFailure(HarnessError, RuntimeError):
    """A model call failed; the query is recorded as unanswered"""


class ClientExhausted(ClientFailure):
    """Retries spent on transient errors"""

    def __init__(self, message, attempts=0, last_status=None):
        super().__init__(message)
        self.attempts = attempts
        self.last_status = last_status


class MalformedResponse(ClientFailure):
    """Response body lacks choices[0].message.content"""

    def __init__(self, message, raw_body=""):
        super().__init__(message)
        self.raw_body = raw_body


class ClientAuthError(HarnessError, RuntimeError):
    """HTTP 401/403 or missing API key; aborts the whole run"""
