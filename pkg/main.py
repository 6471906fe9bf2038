"""Entry point for `uv run main.py <command> ...`.

Equivalent to `uv run python -m src`; see `--help` or docs/vertex-ring.md.
"""

from __future__ import annotations

from src.cli import main


if __name__ == "__main__":
    raise SystemExit(main())
