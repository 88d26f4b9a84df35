"""
Chat Completion Client
HTTP chat-completions client with retry/backoff, rate limiting and a bounded in-flight count
"""

import logging
import os
import threading
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import requests

from .. import env_loader
from ..exceptions import ClientAuthError, ClientExhausted, ClientFailure, ConfigError, MalformedResponse
from ..prompting.messages import MessageList, messages_to_dicts

RETRY_STATUS = frozenset({429, 500, 502, 503, 504})
AUTH_STATUS = frozenset({401, 403})


@dataclass
class ClientConfig:
    """Connection and retry policy; holds the name of the key variable, never the key"""
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-3.5-turbo"
    api_key_env: str = "OPENAI_API_KEY"
    timeout: float = 60.0
    max_retries: int = 5
    backoff_base: float = 1.0
    backoff_multiplier: float = 2.0
    backoff_max: float = 60.0
    max_concurrent: int = 4
    requests_per_second: float = 0.0  # 0 disables the token bucket
    decoding_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_concurrent < 1:
            raise ConfigError(f"max_concurrent must be >= 1, got {self.max_concurrent}")
        if self.max_retries < 0:
            raise ConfigError(f"max_retries must be >= 0, got {self.max_retries}")
        if self.timeout <= 0:
            raise ConfigError(f"timeout must be positive, got {self.timeout}")
        reserved = {"model", "messages"} & set(self.decoding_overrides)
        if reserved:
            raise ConfigError(f"decoding_overrides may not set {sorted(reserved)}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "ClientConfig":
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"Unknown client config fields: {sorted(unknown)}")
        return cls(**data)

    def with_env_overrides(self) -> "ClientConfig":
        """
        Apply SITTRACK_* environment variables on top of this config

        Returns:
            New ClientConfig
        """
        values = self.to_dict()
        values["endpoint"] = env_loader.get("SITTRACK_ENDPOINT", self.endpoint)
        values["model"] = env_loader.get("SITTRACK_MODEL", self.model)
        values["api_key_env"] = env_loader.get("SITTRACK_API_KEY_ENV", self.api_key_env)
        values["max_concurrent"] = env_loader.get_int("SITTRACK_MAX_CONCURRENT", self.max_concurrent)
        values["timeout"] = env_loader.get_float("SITTRACK_TIMEOUT", self.timeout)
        values["max_retries"] = env_loader.get_int("SITTRACK_MAX_RETRIES", self.max_retries)
        return ClientConfig(**values)


class TokenBucket:
    """Thread-safe token bucket; acquire() blocks until a token is available"""

    def __init__(self, rate: float, capacity: float = 1.0,
                 clock: Callable[[], float] = time.monotonic,
                 sleep_fn: Callable[[float], None] = time.sleep):
        self.rate = rate
        self.capacity = max(capacity, 1.0)
        self.clock = clock
        self.sleep_fn = sleep_fn
        self._tokens = self.capacity
        self._stamp = clock()
        self._lock = threading.Lock()

    def acquire(self):
        if self.rate <= 0:
            return
        while True:
            with self._lock:
                now = self.clock()
                self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.rate)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            self.sleep_fn(wait)


def _retry_after(headers) -> Optional[float]:
    if not headers:
        return None
    value = headers.get("Retry-After")
    if value is None:
        return None
    try:
        return max(float(value), 0.0)
    except (TypeError, ValueError):
        return None


class ChatCompletionClient:
    """Chat-completions client shared by concurrent trials"""

    def __init__(self, config: ClientConfig, session=None,
                 sleep_fn: Callable[[float], None] = time.sleep,
                 clock: Callable[[], float] = time.monotonic,
                 api_key: Optional[str] = None):
        """
        Initialize Chat Completion Client

        Args:
            config: Endpoint, model and retry policy
            session: requests.Session or compatible object exposing post()
            sleep_fn: Sleep used for backoff and rate limiting
            clock: Monotonic clock for the token bucket
            api_key: Explicit key (default: read from config.api_key_env)
        """
        self.config = config
        self.name = config.model
        self.session = session if session is not None else requests.Session()
        self.sleep_fn = sleep_fn
        self.bucket = TokenBucket(config.requests_per_second, clock=clock, sleep_fn=sleep_fn)
        self.logger = logging.getLogger(__name__)

        self._api_key = api_key
        self._slots = threading.BoundedSemaphore(config.max_concurrent)
        self._counter_lock = threading.Lock()
        self._in_flight = 0
        self.peak_in_flight = 0
        self.retries = 0

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = self._api_key if self._api_key is not None else os.getenv(self.config.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    @contextmanager
    def _slot(self):
        with self._slots:
            with self._counter_lock:
                self._in_flight += 1
                self.peak_in_flight = max(self.peak_in_flight, self._in_flight)
            try:
                yield
            finally:
                with self._counter_lock:
                    self._in_flight -= 1

    def _extract_content(self, response) -> str:
        try:
            content = response.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise MalformedResponse(f"Unexpected response body: {e}", raw_body=response.text) from e
        if not isinstance(content, str):
            raise MalformedResponse("choices[0].message.content is not a string", raw_body=response.text)
        return content

    def complete(self, messages: MessageList, oracle_view=None) -> str:
        """
        Send one chat-completions request

        Args:
            messages: Chat messages, sent unaltered
            oracle_view: Ignored; present for interface parity with scripted agents

        Returns:
            choices[0].message.content

        Raises:
            ClientAuthError: On HTTP 401/403
            MalformedResponse: If the body lacks the content path
            ClientFailure: On a non-retryable HTTP status
            ClientExhausted: When all retries are spent
        """
        body = {"model": self.config.model, "messages": messages_to_dicts(messages)}
        body.update(self.config.decoding_overrides)

        delay = self.config.backoff_base
        last_status = None
        attempts = self.config.max_retries + 1
        for attempt in range(1, attempts + 1):
            self.bucket.acquire()
            retry_after = None
            try:
                with self._slot():
                    response = self.session.post(self.config.endpoint, json=body,
                                                 headers=self._headers(), timeout=self.config.timeout)
            except (requests.Timeout, requests.ConnectionError) as e:
                last_status = None
                reason = type(e).__name__
            else:
                status = response.status_code
                if status in AUTH_STATUS:
                    raise ClientAuthError(f"Authentication rejected with HTTP {status}")
                if status in RETRY_STATUS:
                    last_status = status
                    reason = f"HTTP {status}"
                    retry_after = _retry_after(getattr(response, "headers", None))
                elif status >= 400:
                    raise ClientFailure(f"Request rejected with HTTP {status}")
                else:
                    return self._extract_content(response)

            if attempt == attempts:
                break
            wait = max(min(delay, self.config.backoff_max), retry_after or 0.0)
            with self._counter_lock:
                self.retries += 1
            self.logger.warning(f"Attempt {attempt}/{attempts} failed ({reason}), retrying in {wait:.2f}s")
            self.sleep_fn(wait)
            delay *= self.config.backoff_multiplier

        self.logger.error(f"Giving up after {attempts} attempts (last status: {last_status})")
        raise ClientExhausted(f"No response after {attempts} attempts", attempts=attempts, last_status=last_status)

    def close(self):
        close = getattr(self.session, "close", None)
        if close is not None:
            close()
