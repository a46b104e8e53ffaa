"""Text-generation backends: deterministic mocks and remote HTTP endpoints.

Two wire formats are spoken, both returning OpenAI-style ``choices``:

* raw completion -- ``POST {prompt, max_tokens, temperature}`` and the
  text is read from ``choices[0].text``;
* chat -- ``POST {messages: [{role: "user", content}], max_tokens,
  temperature}`` and the text is read from ``choices[0].message.content``.

Request bodies are serialized with sorted keys and no whitespace so the
bytes on the wire are reproducible.  Transport failures are retried with
exponential backoff; application-level problems (bad payloads, empty
text) are never retried.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
import time
from dataclasses import dataclass
from typing import Any

import requests

from .errors import BackendUnreachable, EmptyGeneration, MalformedResponse


@dataclass(frozen=True)
class GenerationParams:
    """Sampling and transport parameters for one run.

    The study this package reproduces does not pin sampling parameters,
    so the defaults here are package decisions; report them alongside any
    live results.
    """

    max_tokens: int = 1024
    temperature: float = 1.0
    timeout: float = 120.0
    retries: int = 2

    def __post_init__(self) -> None:
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


@dataclass(frozen=True)
class GenerationContext:
    """Where in the simulation a request originates (drives mock output)."""

    agent_id: int
    generation: int
    seed: int


@dataclass(frozen=True)
class GeneratedText:
    """A backend answer: ``text`` is stripped, ``raw`` is as received."""

    text: str
    raw: str


_STORY_SPLIT = re.compile(r"\n\nStory \d+:\n")


def story_blocks(prompt: str) -> list[str]:
    """Story texts embedded in an assembled transformation prompt.

    Relies on the ``Story k:`` headers of the prompt template; a story
    whose own text happens to contain such a header is over-split, which
    is acceptable for the deterministic mock rules this feeds.
    """
    pieces = _STORY_SPLIT.split("\n\n" + prompt.removeprefix("\n\n"))
    return pieces[1:]


MOCK_RULES = ("echo_first", "concat_head", "templated")


class MockBackend:
    """Deterministic stand-in for a live endpoint.

    Rules:

    * ``echo_first`` -- repeat the first received story verbatim; at
      generation 0 (no stories in the prompt) emit a fixed per-agent
      opener that does not depend on the seed.
    * ``concat_head`` -- the first ``head_words`` whitespace-separated
      words of the received stories (of the whole prompt at generation 0).
    * ``templated`` -- a sentence derived from agent id, generation, seed
      and a hash of the prompt; distinct agents and seeds diverge.
    """

    kind = "mock"

    def __init__(self, rule: str = "templated", head_words: int = 3) -> None:
        if rule not in MOCK_RULES:
            raise ValueError(f"unknown mock rule {rule!r}; known: {', '.join(MOCK_RULES)}")
        if head_words < 1:
            raise ValueError("head_words must be positive")
        self.rule = rule
        self.head_words = head_words

    def generate(
        self, prompt: str, params: GenerationParams, context: GenerationContext
    ) -> GeneratedText:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        if self.rule == "echo_first":
            raw = self._echo_first(prompt, context)
        elif self.rule == "concat_head":
            raw = self._concat_head(prompt)
        else:
            raw = self._templated(prompt, context)
        return GeneratedText(text=raw.strip(), raw=raw)

    def _echo_first(self, prompt: str, context: GenerationContext) -> str:
        blocks = story_blocks(prompt)
        if blocks:
            return blocks[0]
        return f"Agent {context.agent_id} tells the opening story."

    def _concat_head(self, prompt: str) -> str:
        blocks = story_blocks(prompt)
        words = " ".join(blocks).split() if blocks else prompt.split()
        if not words:
            words = ["story"]
        return " ".join(words[: self.head_words])

    def _templated(self, prompt: str, context: GenerationContext) -> str:
        digest = hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:8]
        return (
            f"Once upon generation {context.generation}, agent "
            f"{context.agent_id} of seed {context.seed} spun the yarn {digest}."
        )


def canonical_body(payload: dict[str, Any]) -> bytes:
    """Reproducible request bytes: sorted keys, compact separators, UTF-8."""
    return json.dumps(
        payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode("utf-8")


class _HttpBackend:
    """Shared transport: canonical body, retry with exponential backoff,
    a semaphore capping concurrent in-flight requests."""

    kind = "http"

    def __init__(
        self,
        url: str,
        bearer_token: str | None = None,
        parallelism: int = 4,
        backoff_base: float = 1.0,
    ) -> None:
        if not url.startswith(("http://", "https://")):
            raise ValueError(f"backend url must be http(s), got {url!r}")
        self.url = url
        self.bearer_token = bearer_token
        self.backoff_base = backoff_base
        self._slots = threading.Semaphore(max(1, parallelism))

    def _payload(self, prompt: str, params: GenerationParams) -> dict[str, Any]:
        raise NotImplementedError

    def _extract(self, data: Any) -> Any:
        raise NotImplementedError

    def generate(
        self, prompt: str, params: GenerationParams, context: GenerationContext
    ) -> GeneratedText:
        if not prompt:
            raise ValueError("prompt must be non-empty")
        data = self._post(canonical_body(self._payload(prompt, params)), params)
        try:
            raw = self._extract(data)
        except (KeyError, IndexError, TypeError):
            raw = None
        if not isinstance(raw, str):
            raise MalformedResponse(f"{self.url} returned no text field")
        text = raw.strip()
        if not text:
            raise EmptyGeneration(f"{self.url} returned empty text")
        return GeneratedText(text=text, raw=raw)

    def _post(self, body: bytes, params: GenerationParams) -> Any:
        headers = {"Content-Type": "application/json"}
        if self.bearer_token:
            headers["Authorization"] = f"Bearer {self.bearer_token}"
        attempts = params.retries + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            if attempt:
                time.sleep(self.backoff_base * 2 ** (attempt - 1))
            try:
                with self._slots:
                    response = requests.post(
                        self.url, data=body, headers=headers, timeout=params.timeout
                    )
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                # server-side hiccups are worth retrying, client errors are not
                last_error = RuntimeError(f"HTTP {response.status_code}")
                continue
            if not 200 <= response.status_code < 300:
                raise BackendUnreachable(
                    f"{self.url} answered HTTP {response.status_code}"
                )
            try:
                return response.json()
            except ValueError as exc:
                raise MalformedResponse(f"{self.url} returned a non-JSON body") from exc
        raise BackendUnreachable(
            f"{self.url} unreachable after {attempts} attempts: {last_error}"
        )


class HttpCompletionBackend(_HttpBackend):
    """Raw completion endpoint: text lives at ``choices[0].text``."""

    kind = "http_completion"

    def _payload(self, prompt: str, params: GenerationParams) -> dict[str, Any]:
        return {
            "prompt": prompt,
            "max_tokens": params.max_tokens,
            "temperature": params.temperature,
        }

    def _extract(self, data: Any) -> Any:
        return data["choices"][0]["text"]


class HttpChatBackend(_HttpBackend):
    """Chat endpoint: text lives at ``choices[0].message.content``."""

    kind = "http_chat"

    def _payload(self, prompt: str, params: GenerationParams) -> dict[str, Any]:
        return {
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": params.max_tokens,
            "temperature": params.temperature,
        }

    def _extract(self, data: Any) -> Any:
        return data["choices"][0]["message"]["content"]


@dataclass(frozen=True)
class BackendSpec:
    """Serializable backend description, as stored in run configs."""

    kind: str  # "mock" | "http_completion" | "http_chat"
    url: str | None = None
    rule: str | None = None
    head_words: int = 3
    bearer_token: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "mock":
            if self.rule not in MOCK_RULES:
                raise ValueError(f"mock backend needs a rule out of {MOCK_RULES}")
        elif self.kind in ("http_completion", "http_chat"):
            if not self.url:
                raise ValueError(f"{self.kind} backend needs a url")
        else:
            raise ValueError(f"unknown backend kind {self.kind!r}")

    def build(self, parallelism: int = 4, backoff_base: float = 1.0):
        if self.kind == "mock":
            return MockBackend(rule=self.rule or "templated", head_words=self.head_words)
        cls = HttpCompletionBackend if self.kind == "http_completion" else HttpChatBackend
        return cls(
            self.url or "",
            bearer_token=self.bearer_token,
            parallelism=parallelism,
            backoff_base=backoff_base,
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "url": self.url,
            "rule": self.rule,
            "head_words": self.head_words,
            "bearer_token": self.bearer_token,
        }

    @classmethod
    def from_json(cls, payload: dict[str, Any]) -> "BackendSpec":
        return cls(
            kind=payload["kind"],
            url=payload.get("url"),
            rule=payload.get("rule"),
            head_words=payload.get("head_words", 3),
            bearer_token=payload.get("bearer_token"),
        )


_RULE_ALIASES = {"echo": "echo_first", "concat": "concat_head"}


def parse_backend_arg(arg: str) -> BackendSpec:
    """Parse command-line shorthand.

    ``mock:RULE[:K]`` (rules: echo|echo_first, concat|concat_head with an
    optional word count, templated), ``http:URL`` for raw completion and
    ``chat:URL`` for chat endpoints.  A bare ``http(s)://`` URL counts as
    a raw completion endpoint.
    """
    if arg.startswith(("http://", "https://")):
        return BackendSpec(kind="http_completion", url=arg)
    scheme, _, rest = arg.partition(":")
    if scheme == "mock":
        rule, _, count = rest.partition(":")
        rule = _RULE_ALIASES.get(rule, rule) or "templated"
        head_words = int(count) if count else 3
        return BackendSpec(kind="mock", rule=rule, head_words=head_words)
    if scheme == "http":
        return BackendSpec(kind="http_completion", url=rest)
    if scheme == "chat":
        return BackendSpec(kind="http_chat", url=rest)
    raise ValueError(
        f"unknown backend {arg!r}; expected mock:RULE, http:URL or chat:URL"
    )
