"""Service configuration.

One JSON file configures the service and CLI. Secrets are referenced by
environment variable name only. Documented keys:

    {
      "listen_host": "127.0.0.1", "listen_port": 8400,
      "data_dir": "./data",
      "tick_seconds": 5.0,
      "clock": "system",                      # "simulated" honored in sim/test use
      "scorer": {"mode": "lexicon", "remote_endpoint": "", "remote_key_env": "...",
                 "timeout_s": 10.0, "abusive_threshold": 0.8, "caution_threshold": 0.5,
                 "lexicon_path": ""},
      "smtp": {"host": "localhost", "port": 25, "starttls": false,
               "username_env": "...", "password_env": "...",
               "sender": "alerts@safespace.local", "timeout_s": 10.0},
      "extractor_command": ["tesseract", "stdin", "stdout"],
      "max_send_attempts": 8
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from safespace.alerts.types import SmtpConfig
from safespace.errors import ParseError
from safespace.toxicity.types import ScorerConfig


@dataclass
class AppConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8400
    data_dir: str = "./data"
    tick_seconds: float = 5.0
    clock: str = "system"
    scorer: ScorerConfig = field(default_factory=ScorerConfig)
    smtp: SmtpConfig = field(default_factory=SmtpConfig)
    extractor_command: list[str] | None = None
    max_send_attempts: int = 8
    start_loops: bool = True
    static_dir: str = ""


def load_config(path: str | Path) -> AppConfig:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    scorer = ScorerConfig(**payload.get("scorer", {}))
    smtp = SmtpConfig(**payload.get("smtp", {}))
    known = {
        k: payload[k]
        for k in ("listen_host", "listen_port", "data_dir", "tick_seconds", "clock",
                  "extractor_command", "max_send_attempts", "start_loops", "static_dir")
        if k in payload
    }
    return AppConfig(scorer=scorer, smtp=smtp, **known)
