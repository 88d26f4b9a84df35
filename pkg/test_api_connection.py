"""
Loopback API Tests
End-to-end run against a local chat-completions server
"""

import json
import re
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pandas as pd
import pytest

from src.utils import cmd_generate, cmd_report, cmd_run, load_run_config, read_payloads
from src.utils.storage import TRIAL_KIND

ATOM_RE = re.compile(r"([A-Za-z0-9]+)\(([A-Za-z0-9]+-\d)\)=(True|False)")
STEP_RE = re.compile(r"^Step-\d+: Open ([A-Za-z0-9]+-\d) and retrieve ([A-Za-z0-9]+-\d)\.", re.MULTILINE)


def solve(messages):
    """Replay step lines after the last shown answer (normal instructions only)"""
    text = "\n".join(m["content"] for m in messages)
    last_answer = text.rfind("Answer: ")
    line_end = text.find("\n", last_answer)
    atoms = ATOM_RE.findall(text[last_answer:line_end if line_end != -1 else None])
    state = {argument: [functor, token] for functor, argument, token in atoms}
    for box, key in STEP_RE.findall(text[last_answer:]):
        state[box][1] = "True"
        state[key][1] = "True"
    return "Answer: " + ", ".join(f"{functor}({argument})={token}" for argument, (functor, token) in state.items())


class SolverState:
    def __init__(self, fail_every=4):
        self.fail_every = fail_every
        self.requests = 0
        self.in_flight = 0
        self.peak = 0
        self.auth_headers = set()
        self.lock = threading.Lock()


def make_handler(solver):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
            with solver.lock:
                solver.requests += 1
                number = solver.requests
                solver.in_flight += 1
                solver.peak = max(solver.peak, solver.in_flight)
                solver.auth_headers.add(self.headers.get("Authorization"))
            try:
                time.sleep(0.01)
                if number % solver.fail_every == 0:
                    self._reply(503, {"error": "overloaded"})
                else:
                    content = solve(body["messages"])
                    self._reply(200, {"choices": [{"message": {"role": "assistant", "content": content}}]})
            finally:
                with solver.lock:
                    solver.in_flight -= 1

        def _reply(self, status, payload):
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, format, *args):
            pass

    return Handler


@pytest.fixture
def loopback():
    solver = SolverState()
    server = ThreadingHTTPServer(("127.0.0.1", 0), make_handler(solver))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/v1/chat/completions", solver
    server.shutdown()
    server.server_close()


def test_loopback_final_query_run(tmp_path, monkeypatch, loopback):
    """Test: ten instances, every fourth request fails, the rest are solved"""
    endpoint, solver = loopback
    monkeypatch.setenv("SITTRACK_LOOPBACK_KEY", "sk-loopback")
    config = load_run_config(overrides={
        "out": str(tmp_path),
        "lexicon_modes": ["nl+nl"],
        "variants": ["normal"],
        "shots": [2],
        "samples": 10,
        "agent": "http",
        "concurrency": 3,
        "client": {"endpoint": endpoint, "model": "loopback-solver", "api_key_env": "SITTRACK_LOOPBACK_KEY",
                   "max_retries": 0, "max_concurrent": 3, "timeout": 10},
    }, use_env=False)

    cmd_generate(config)
    transcripts = cmd_run(config, show_progress=False)

    payloads = read_payloads(transcripts, TRIAL_KIND)
    assert len(payloads) == 10
    assert sum(p["answered"] for p in payloads) == 8
    assert solver.requests == 10
    assert solver.peak <= 3
    assert solver.auth_headers == {"Bearer sk-loopback"}

    failed = [p["queries"][0] for p in payloads if not p["answered"]]
    assert all("after 1 attempts" in q["error"] and q["raw_response"] is None for q in failed)

    outputs = cmd_report(config, make_plots=False)
    assert "grid_loopback_solver_final_traditional" in outputs
    summary = pd.read_csv(outputs["summary"])
    assert summary.loc[0, "response_rate"] == pytest.approx(0.8)
    assert summary.loc[0, "step_em"] == 1.0
    assert summary.loc[0, "scored"] == 8
