"""
Client Tests
HTTP retry policy, concurrency bound and scripted agents
"""

import logging
import threading

import pytest
import requests
from scipy import stats

from conftest import FakeResponse, FakeSession, chat_body
from src.clients import (
    AgentKind,
    ChatCompletionClient,
    ClientConfig,
    OracleView,
    ScriptedAgent,
    ScriptedAgentKind,
    TokenBucket,
    scripted_complete,
)
from src.evaluation import extract_states
from src.exceptions import ClientAuthError, ClientExhausted, ClientFailure, ConfigError, MalformedResponse, NoPreviousAnswer
from src.prompting import SYSTEM_MESSAGE, ChatMessage, Role

MESSAGES = [
    ChatMessage(Role.SYSTEM, SYSTEM_MESSAGE),
    ChatMessage(Role.USER, "Step-0: Initialization. Do nothing.\nQuestion: OPENED(BOX-0)=? OBTAINED(KEY-0)=?"),
]


def _client(session, fake_sleep, **overrides):
    config = ClientConfig(**{"endpoint": "http://test/v1/chat/completions", "model": "test-model",
                             "api_key_env": "SITTRACK_TEST_KEY", "max_retries": 3, "backoff_base": 0.5,
                             **overrides})
    return ChatCompletionClient(config, session=session, sleep_fn=fake_sleep, api_key="sk-test")


def test_request_body_and_content(fake_sleep):
    """Test: standard body, system message first, first choice returned"""
    session = FakeSession([FakeResponse(200, chat_body("Answer: OPENED(BOX-0)=False"))])
    client = _client(session, fake_sleep)

    assert client.complete(MESSAGES) == "Answer: OPENED(BOX-0)=False"
    body = session.requests[0]["json"]
    assert body == {"model": "test-model", "messages": [m.to_dict() for m in MESSAGES]}
    assert body["messages"][0] == {"role": "system", "content": "You are a helpful assistant."}
    assert session.requests[0]["headers"]["Authorization"] == "Bearer sk-test"


def test_decoding_overrides_sent(fake_sleep):
    """Test: overrides are merged into the body"""
    session = FakeSession([FakeResponse(200, chat_body("x"))])
    _client(session, fake_sleep, decoding_overrides={"temperature": 0}).complete(MESSAGES)
    assert session.requests[0]["json"]["temperature"] == 0


def test_retry_after_429(fake_sleep, sleeps, caplog):
    """Test: 429 then 200 gives one retry with a logged warning"""
    session = FakeSession([FakeResponse(429, {}), FakeResponse(200, chat_body("ok"))])
    client = _client(session, fake_sleep)

    with caplog.at_level(logging.WARNING):
        assert client.complete(MESSAGES) == "ok"
    assert len(session.requests) == 2
    assert sleeps == [pytest.approx(0.5)]
    assert client.retries == 1
    assert "HTTP 429" in caplog.text


def test_retry_after_header_honored(fake_sleep, sleeps):
    """Test: Retry-After lengthens the wait"""
    session = FakeSession([FakeResponse(503, {}, headers={"Retry-After": "2.5"}), FakeResponse(200, chat_body("ok"))])
    _client(session, fake_sleep).complete(MESSAGES)
    assert sleeps == [pytest.approx(2.5)]


def test_retry_after_beyond_backoff_cap(fake_sleep, sleeps):
    """Test: the backoff cap never cuts a server-requested wait short"""
    session = FakeSession([FakeResponse(429, {}, headers={"Retry-After": "90"}), FakeResponse(500, {}),
                           FakeResponse(200, chat_body("ok"))])
    _client(session, fake_sleep, backoff_base=40.0, backoff_max=45.0).complete(MESSAGES)
    assert sleeps == [pytest.approx(90.0), pytest.approx(45.0)]


def test_exponential_backoff_then_exhausted(fake_sleep, sleeps):
    """Test: retries spent on server errors and timeouts"""
    session = FakeSession([FakeResponse(500, {}), requests.Timeout("slow"), FakeResponse(502, {}),
                           FakeResponse(504, {})])
    with pytest.raises(ClientExhausted) as excinfo:
        _client(session, fake_sleep).complete(MESSAGES)

    assert excinfo.value.attempts == 4
    assert excinfo.value.last_status == 504
    assert sleeps == [pytest.approx(0.5), pytest.approx(1.0), pytest.approx(2.0)]
    assert isinstance(excinfo.value, ClientFailure)


@pytest.mark.parametrize("status", [401, 403])
def test_auth_error(fake_sleep, status):
    """Test: rejected credentials abort immediately"""
    session = FakeSession([FakeResponse(status, {})])
    with pytest.raises(ClientAuthError):
        _client(session, fake_sleep).complete(MESSAGES)
    assert len(session.requests) == 1


def test_malformed_response(fake_sleep):
    """Test: a body without choices keeps the raw text"""
    session = FakeSession([FakeResponse(200, text="<html>oops</html>")])
    with pytest.raises(MalformedResponse) as excinfo:
        _client(session, fake_sleep).complete(MESSAGES)
    assert excinfo.value.raw_body == "<html>oops</html>"


def test_non_retryable_status(fake_sleep):
    """Test: a 400 fails without retrying"""
    session = FakeSession([FakeResponse(400, {})])
    with pytest.raises(ClientFailure):
        _client(session, fake_sleep).complete(MESSAGES)
    assert len(session.requests) == 1


def test_concurrency_bound():
    """Test: requests in flight never exceed max_concurrent"""
    session = FakeSession([FakeResponse(200, chat_body("ok")) for _ in range(24)], delay=0.02)
    client = ChatCompletionClient(ClientConfig(max_concurrent=3), session=session, api_key="")

    threads = [threading.Thread(target=client.complete, args=(MESSAGES,)) for _ in range(24)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    assert len(session.requests) == 24
    assert session.peak <= 3
    assert client.peak_in_flight <= 3


def test_token_bucket_waits():
    """Test: the bucket sleeps for the missing fraction of a token"""
    now = [0.0]
    waits = []

    def sleep(delay):
        waits.append(delay)
        now[0] += delay

    bucket = TokenBucket(rate=2.0, clock=lambda: now[0], sleep_fn=sleep)
    bucket.acquire()
    bucket.acquire()
    assert waits == [pytest.approx(0.5)]


def test_config_never_holds_secret(monkeypatch):
    """Test: serialized config names the key variable only"""
    monkeypatch.setenv("OPENAI_API_KEY", "sk-secret-value")
    data = ClientConfig().to_dict()
    assert data["api_key_env"] == "OPENAI_API_KEY"
    assert "sk-secret-value" not in str(data)


def test_config_env_overrides(monkeypatch):
    """Test: SITTRACK_* variables override client fields"""
    monkeypatch.setenv("SITTRACK_ENDPOINT", "http://localhost:9/v1/chat/completions")
    monkeypatch.setenv("SITTRACK_MODEL", "local-model")
    monkeypatch.setenv("SITTRACK_MAX_CONCURRENT", "7")
    config = ClientConfig().with_env_overrides()
    assert config.endpoint == "http://localhost:9/v1/chat/completions"
    assert config.model == "local-model"
    assert config.max_concurrent == 7


def test_config_validation():
    """Test: invalid client settings"""
    with pytest.raises(ConfigError):
        ClientConfig(max_concurrent=0)
    with pytest.raises(ConfigError):
        ClientConfig(decoding_overrides={"model": "x"})
    with pytest.raises(ConfigError):
        ClientConfig.from_dict({"endpiont": "typo"})


class TestScriptedAgents:
    expected = "Answer: OPENED(BOX-0)=True, OBTAINED(KEY-0)=False, OPENED(BOX-1)=False, OBTAINED(KEY-1)=True"
    previous = "Answer: OPENED(BOX-0)=False, OBTAINED(KEY-0)=False, OPENED(BOX-1)=False, OBTAINED(KEY-1)=False"

    def test_oracle(self):
        """Test: the oracle returns the expected answer verbatim"""
        agent = ScriptedAgent(ScriptedAgentKind(AgentKind.ORACLE))
        assert agent.complete(MESSAGES, OracleView(self.expected, self.previous)) == self.expected
        assert agent.name == "oracle"

    def test_copy_last(self):
        """Test: the most recent answer line without its prefix"""
        messages = MESSAGES + [ChatMessage(Role.ASSISTANT, "Answer: OPENED(BOX-0)=False"),
                               ChatMessage(Role.USER, "Step-1: Open BOX-0 and retrieve KEY-1.\nQuestion: x")]
        assert scripted_complete(ScriptedAgentKind(AgentKind.COPY_LAST), messages, None) == "OPENED(BOX-0)=False"

    def test_copy_last_without_answer(self):
        """Test: no answer block in the prompt"""
        with pytest.raises(NoPreviousAnswer):
            scripted_complete(ScriptedAgentKind(AgentKind.COPY_LAST), MESSAGES, None)

    def test_random_truth_deterministic_and_fair(self):
        """Test: random tokens depend only on messages and seed, and are balanced"""
        kind = ScriptedAgentKind(AgentKind.RANDOM, seed=3)
        assert scripted_complete(kind, MESSAGES, None) == scripted_complete(kind, MESSAGES, None)

        trues = total = 0
        for i in range(500):
            messages = MESSAGES + [ChatMessage(Role.USER, f"Step-{i}\nQuestion: "
                                               + " ".join(f"OPENED(BOX-{j})=?" for j in range(10)))]
            atoms = extract_states(scripted_complete(kind, messages, None))
            assert len(atoms) == 10
            trues += sum(atom.value for atom in atoms)
            total += len(atoms)
        assert stats.binomtest(trues, total, 0.5).pvalue > 1e-4

    def test_forgetful_only_flips_untouched(self):
        """Test: p=1 flips every untouched state and leaves changed states alone"""
        kind = ScriptedAgentKind(AgentKind.FORGETFUL, p=1.0, seed=0)
        answer = scripted_complete(kind, MESSAGES, OracleView(self.expected, self.previous))
        assert answer == ("Answer: OPENED(BOX-0)=True, OBTAINED(KEY-0)=True, "
                          "OPENED(BOX-1)=True, OBTAINED(KEY-1)=True")

        never = ScriptedAgentKind(AgentKind.FORGETFUL, p=0.0)
        assert scripted_complete(never, MESSAGES, OracleView(self.expected, self.previous)) == self.expected

    def test_oracle_needs_view(self):
        """Test: the oracle cannot answer blind"""
        with pytest.raises(ValueError):
            scripted_complete(ScriptedAgentKind(AgentKind.ORACLE), MESSAGES, None)

    def test_bad_probability(self):
        """Test: forgetting probability outside [0, 1]"""
        with pytest.raises(ConfigError):
            ScriptedAgentKind(AgentKind.FORGETFUL, p=1.5)

    def test_negative_seed(self):
        """Test: agent seeds must be non-negative"""
        with pytest.raises(ConfigError):
            ScriptedAgentKind(AgentKind.RANDOM, seed=-1)
