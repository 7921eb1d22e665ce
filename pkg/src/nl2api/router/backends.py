"""Backend handles: the pluggable text-completion interface.

A backend is anything with `complete(prompt, params) -> str` and an
`identity` string. The deterministic rule backend lives in rule.py; the
remote handle below speaks the common chat-completion wire shape:

    POST <endpoint_url>
    {"model": ..., "messages": [{"role": "user", "content": ...}],
     "temperature": ..., "max_tokens": ..., "seed": ...?}

and reads the assistant text from choices[0].message.content (falling back
to choices[0].text). The credential is read from the environment variable
named by credential_ref and is never logged or echoed.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import httpx

from ..errors import BackendUnreachable

MAX_RETRIES = 5


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.0
    max_tokens: int = 512
    seed: int | None = None
    retries: int = 2

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be positive, got {self.max_tokens}")
        if not 0 <= self.retries <= MAX_RETRIES:
            raise ValueError(f"retries must be in [0, {MAX_RETRIES}], got {self.retries}")


@runtime_checkable
class BackendHandle(Protocol):
    identity: str

    def complete(self, prompt: str, params: GenerationParams) -> str: ...


class CountingBackend:
    """Delegating wrapper that counts complete() invocations."""

    def __init__(self, inner: BackendHandle):
        self.inner = inner
        self.calls = 0
        self.identity = f"counting({inner.identity})"

    def complete(self, prompt: str, params: GenerationParams) -> str:
        self.calls += 1
        return self.inner.complete(prompt, params)


class RemoteBackend:
    """HTTP chat-completion client with a bounded in-flight limit."""

    def __init__(
        self,
        endpoint_url: str,
        model_name: str,
        credential_ref: str = "",
        timeout_ms: int = 30_000,
        in_flight_limit: int = 4,
        transport: httpx.BaseTransport | None = None,
    ):
        if timeout_ms <= 0:
            raise ValueError(f"timeout_ms must be positive, got {timeout_ms}")
        self.endpoint_url = endpoint_url
        self.model_name = model_name
        self.credential_ref = credential_ref
        self.identity = f"remote:{model_name}"
        self._semaphore = threading.Semaphore(max(1, in_flight_limit))
        self._client = httpx.Client(timeout=timeout_ms / 1000.0, transport=transport)

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.credential_ref:
            credential = os.environ.get(self.credential_ref, "")
            if credential:
                headers["Authorization"] = f"Bearer {credential}"
        return headers

    def complete(self, prompt: str, params: GenerationParams) -> str:
        body: dict = {
            "model": self.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        if params.seed is not None:
            body["seed"] = params.seed
        with self._semaphore:
            try:
                response = self._client.post(self.endpoint_url, json=body, headers=self._headers())
            except httpx.HTTPError as exc:
                raise BackendUnreachable(f"backend request failed: {exc}") from exc
        if response.status_code != 200:
            raise BackendUnreachable(
                f"backend returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            payload = response.json()
            choice = payload["choices"][0]
            if "message" in choice:
                text = choice["message"]["content"]
            else:
                text = choice["text"]
        except (ValueError, LookupError, TypeError) as exc:
            raise BackendUnreachable(f"unexpected backend response shape: {exc}") from exc
        if not isinstance(text, str):
            raise BackendUnreachable("backend response content is not text")
        return text

    def close(self) -> None:
        self._client.close()
