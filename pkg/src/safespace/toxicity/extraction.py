"""Text extraction from screenshots.

Bundling an OCR engine is out of scope; extraction is an interface with two
implementations: an adapter that pipes the image to a configured external
command (image on stdin, UTF-8 text on stdout, exit 0 on success) and a stub
returning canned text for tests.
"""

from __future__ import annotations

import subprocess
from typing import Protocol

from safespace.errors import ExtractionFailed


class TextExtractor(Protocol):
    def extract(self, image: bytes) -> str: ...


class CommandExtractor:
    def __init__(self, argv: list[str], timeout_s: float = 30.0):
        if not argv:
            raise ValueError("extractor command must not be empty")
        self.argv = list(argv)
        self.timeout_s = timeout_s

    def extract(self, image: bytes) -> str:
        try:
            proc = subprocess.run(
                self.argv,
                input=image,
                capture_output=True,
                timeout=self.timeout_s,
            )
        except FileNotFoundError as exc:
            raise ExtractionFailed(f"extractor command not found: {self.argv[0]}") from exc
        except subprocess.TimeoutExpired as exc:
            raise ExtractionFailed(f"extractor timed out after {self.timeout_s}s") from exc
        if proc.returncode != 0:
            raise ExtractionFailed(f"extractor exited {proc.returncode}")
        return proc.stdout.decode("utf-8", errors="replace")


class StubExtractor:
    """Returns fixed text regardless of the image. Test use only."""

    def __init__(self, text: str):
        self.text = text

    def extract(self, image: bytes) -> str:
        return self.text
