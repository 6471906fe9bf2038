"""Entry point: `uv run python -m src <command> ...`."""

from __future__ import annotations

from src.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
