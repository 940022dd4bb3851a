"""JSON import/export helpers."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any


def export_dict(data: dict[str, Any], path: str | Path) -> None:
    """Write a dict as JSON with sorted keys."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=str) + "\n")
