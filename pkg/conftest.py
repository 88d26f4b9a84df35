"""
Shared pytest fixtures for the harness test suite
"""

import json
import threading
import time

import pytest

from src.environment import EnvConfig, GenerationSettings, InstructionVariant, LexiconMode, gen_instance


class FakeResponse:
    """Stand-in for requests.Response"""

    def __init__(self, status_code=200, body=None, headers=None, text=None):
        self.status_code = status_code
        self.headers = headers or {}
        self._body = body
        self.text = text if text is not None else json.dumps(body)

    def json(self):
        if self._body is None:
            return json.loads(self.text)
        return self._body


def chat_body(content):
    return {"choices": [{"message": {"role": "assistant", "content": content}}]}


class FakeSession:
    """Replays scripted responses and records every request; counts requests in flight"""

    def __init__(self, responses=None, delay=0.0):
        self.responses = list(responses or [])
        self.delay = delay
        self.requests = []
        self.in_flight = 0
        self.peak = 0
        self._lock = threading.Lock()

    def post(self, url, json=None, headers=None, timeout=None):
        with self._lock:
            self.requests.append({"url": url, "json": json, "headers": headers, "timeout": timeout})
            self.in_flight += 1
            self.peak = max(self.peak, self.in_flight)
            response = self.responses.pop(0) if self.responses else FakeResponse(200, chat_body("Answer: "))
        try:
            if self.delay:
                time.sleep(self.delay)
            if isinstance(response, Exception):
                raise response
            return response
        finally:
            with self._lock:
                self.in_flight -= 1

    def close(self):
        pass


@pytest.fixture
def env10():
    return EnvConfig()


@pytest.fixture
def make_instance():
    """Factory: make_instance(seed, mode='nl+nl', variant='normal', n_shots=2, distractors=False, env=None)"""

    def _make(seed=0, mode="nl+nl", variant="normal", n_shots=2, distractors=False, env=None):
        settings = GenerationSettings(
            env=env or EnvConfig(),
            mode=LexiconMode.from_key(mode),
            variant=InstructionVariant(variant),
            n_shots=n_shots,
            distractors_on=distractors,
        )
        return gen_instance(seed, settings)

    return _make


@pytest.fixture
def sleeps():
    """Records requested sleep durations instead of sleeping"""
    return []


@pytest.fixture
def fake_sleep(sleeps):
    return sleeps.append
