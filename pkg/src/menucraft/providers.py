"""Chat-completion back ends behind one tiny interface.

HttpProvider speaks the common hosted wire shape (POST /chat/completions);
ScriptedProvider replays canned (matcher, reply) pairs so every engine path
can run deterministically offline. Both expose generate(transcript).
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlparse

import requests

from menucraft.prompts import ROLE_ASSISTANT, ROLE_DESIGNER, Message, Transcript

KIND_NETWORK = "network"
KIND_AUTH = "auth"
KIND_RATE_LIMITED = "rate_limited"
KIND_TRUNCATED = "truncated"
KIND_MALFORMED = "malformed_response"

DEFAULT_API_KEY_ENV = "MENUCRAFT_API_KEY"

# Wire roles: the transcript's "designer" is the protocol's "user".
_WIRE_ROLES = {"system": "system", "designer": "user", "assistant": "assistant"}

_MAX_RETRIES = 3
_BACKOFF_SECONDS = (2.0, 4.0, 8.0)


class ProviderError(Exception):
    """A back-end failure, classified by kind."""

    def __init__(self, kind: str, detail: str, retry_after: float | None = None):
        super().__init__(f"{kind}: {detail}")
        self.kind = kind
        self.detail = detail
        self.retry_after = retry_after


@dataclass(frozen=True)
class ProviderConfig:
    """Connection settings. The API key itself lives only in the environment,
    under the variable named by api_key_env."""

    base_url: str = "https://api.openai.com/v1"
    model_name: str = "gpt-3.5-turbo"
    temperature: float = 0.2
    max_reply_chars: int = 100000
    timeout: float = 60.0
    api_key_env: str = DEFAULT_API_KEY_ENV

    def __post_init__(self) -> None:
        parts = urlparse(self.base_url)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise ValueError(f"base_url is not a valid http(s) URL: {self.base_url!r}")
        if not self.model_name:
            raise ValueError("model_name must be non-empty")
        if not 0 <= self.temperature <= 2:
            raise ValueError("temperature must be within [0, 2]")
        if self.max_reply_chars < 1:
            raise ValueError("max_reply_chars must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if not self.api_key_env:
            raise ValueError("api_key_env must be non-empty")


def provider_cfg_to_obj(cfg: ProviderConfig) -> dict:
    return {
        "base_url": cfg.base_url,
        "model_name": cfg.model_name,
        "temperature": cfg.temperature,
        "max_reply_chars": cfg.max_reply_chars,
        "timeout": cfg.timeout,
        "api_key_env": cfg.api_key_env,
    }


def provider_cfg_from_obj(obj) -> ProviderConfig:
    if not isinstance(obj, dict):
        raise ValueError("provider config must be an object")
    if "api_key" in obj:
        raise ValueError(
            "api keys must not be stored in config; set the environment "
            "variable named by api_key_env instead"
        )
    defaults = ProviderConfig()
    unknown = set(obj) - set(provider_cfg_to_obj(defaults))
    if unknown:
        raise ValueError(f"unknown provider config key {sorted(unknown)[0]!r}")
    merged = {**provider_cfg_to_obj(defaults), **obj}
    return ProviderConfig(
        base_url=str(merged["base_url"]),
        model_name=str(merged["model_name"]),
        temperature=float(merged["temperature"]),
        max_reply_chars=int(merged["max_reply_chars"]),
        timeout=float(merged["timeout"]),
        api_key_env=str(merged["api_key_env"]),
    )


def _wire_messages(t: Transcript) -> list[dict]:
    return [{"role": _WIRE_ROLES[m.role], "content": m.text} for m in t]


class HttpProvider:
    """Chat-completions over HTTP, with bounded retry on rate limiting."""

    def __init__(self, cfg: ProviderConfig):
        self.cfg = cfg

    def generate(self, t: Transcript) -> Message:
        if not len(t):
            raise ValueError("cannot generate from an empty transcript")
        key = os.environ.get(self.cfg.api_key_env)
        if not key:
            raise ProviderError(
                KIND_AUTH,
                f"environment variable {self.cfg.api_key_env} is not set",
            )
        url = self.cfg.base_url.rstrip("/") + "/chat/completions"
        payload = {
            "model": self.cfg.model_name,
            "messages": _wire_messages(t),
            "temperature": self.cfg.temperature,
        }
        headers = {"Authorization": f"Bearer {key}"}
        for attempt in range(_MAX_RETRIES + 1):
            try:
                response = requests.post(
                    url, json=payload, headers=headers, timeout=self.cfg.timeout
                )
            except requests.RequestException as exc:
                raise ProviderError(KIND_NETWORK, str(exc)) from exc
            if response.status_code == 429:
                retry_after = _retry_after_seconds(response)
                if attempt == _MAX_RETRIES:
                    raise ProviderError(
                        KIND_RATE_LIMITED,
                        "rate limited after retries",
                        retry_after=retry_after,
                    )
                time.sleep(
                    retry_after if retry_after is not None else _BACKOFF_SECONDS[attempt]
                )
                continue
            return self._parse_response(response)
        raise AssertionError("unreachable")  # pragma: no cover

    def _parse_response(self, response) -> Message:
        if response.status_code in (401, 403):
            raise ProviderError(
                KIND_AUTH, f"authentication rejected ({response.status_code})"
            )
        if response.status_code >= 500:
            raise ProviderError(
                KIND_NETWORK, f"server error {response.status_code}"
            )
        if response.status_code != 200:
            raise ProviderError(
                KIND_MALFORMED, f"unexpected status {response.status_code}"
            )
        try:
            body = response.json()
        except (ValueError, json.JSONDecodeError) as exc:
            raise ProviderError(KIND_MALFORMED, "response body is not JSON") from exc
        try:
            choice = body["choices"][0]
            content = choice["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(
                KIND_MALFORMED, "response lacks choices[0].message.content"
            ) from exc
        if not isinstance(content, str) or not content:
            raise ProviderError(KIND_MALFORMED, "empty assistant content")
        if choice.get("finish_reason") == "length":
            raise ProviderError(KIND_TRUNCATED, "reply stopped at the length limit")
        if len(content) > self.cfg.max_reply_chars:
            raise ProviderError(
                KIND_TRUNCATED,
                f"reply exceeds max_reply_chars ({self.cfg.max_reply_chars})",
            )
        return Message(ROLE_ASSISTANT, content)


def _retry_after_seconds(response) -> float | None:
    raw = response.headers.get("Retry-After")
    if raw is None:
        return None
    try:
        value = float(raw)
    except ValueError:
        return None
    return value if value >= 0 else None


def generate(t: Transcript, cfg: ProviderConfig) -> Message:
    return HttpProvider(cfg).generate(t)


class ScriptedProvider:
    """Plays back (matcher, reply) pairs against the last designer message.

    The first pair whose matcher is a substring of that message is consumed
    and its reply returned; consumed pairs never fire again.
    """

    def __init__(self, pairs):
        self._pairs: list[tuple[str, str]] = [(m, r) for m, r in pairs]
        self._lock = threading.Lock()

    def generate(self, t: Transcript) -> Message:
        last = t.last(ROLE_DESIGNER)
        prompt = last.text if last else ""
        with self._lock:
            for i, (matcher, reply) in enumerate(self._pairs):
                if matcher in prompt:
                    del self._pairs[i]
                    return Message(ROLE_ASSISTANT, reply)
        raise ProviderError(
            KIND_MALFORMED,
            f"script exhausted: no reply matches prompt {prompt[:60]!r}",
        )

    def remaining(self) -> int:
        with self._lock:
            return len(self._pairs)


def scripted_provider(pairs) -> ScriptedProvider:
    return ScriptedProvider(pairs)


def load_script(path: str | Path) -> ScriptedProvider:
    """Script file: JSON list of {"match": str, "reply": str | "reply_file": str}.

    reply_file paths resolve relative to the script file.
    """
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        entries = json.load(fh)
    if not isinstance(entries, list):
        raise ValueError("script must be a JSON list")
    pairs = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "match" not in entry:
            raise ValueError(f"script entry {i} must be an object with 'match'")
        match = entry["match"]
        if not isinstance(match, str):
            raise ValueError(f"script entry {i}: 'match' must be a string")
        if "reply" in entry:
            reply = entry["reply"]
            if not isinstance(reply, str):
                raise ValueError(f"script entry {i}: 'reply' must be a string")
        elif "reply_file" in entry:
            reply = (path.parent / entry["reply_file"]).read_text(encoding="utf-8")
        else:
            raise ValueError(f"script entry {i} needs 'reply' or 'reply_file'")
        pairs.append((match, reply))
    return ScriptedProvider(pairs)
