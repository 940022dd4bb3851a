"""Versioned run manifest: spec echo, tool version, outputs and wall time.

The loader is strict: version and tool check, required fields, and the
``spec`` echo must re-validate into an ExperimentSpec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from oim_relay import __version__
from oim_relay.core.serialize import export_dict
from oim_relay.pipelines.scenario import ExperimentSpec

SUPPORTED_VERSION = "1.0"
TOOL_NAME = "oim-relay"
MANIFEST_NAME = "manifest.json"

_REQUIRED = ("format_version", "tool", "version", "spec", "outputs", "wall_time_s")


class ManifestValidationError(ValueError):
    """Raised when a manifest fails validation."""


@dataclass(frozen=True)
class RunManifest:
    format_version: str
    tool: str
    version: str
    spec: ExperimentSpec
    outputs: tuple[str, ...]
    wall_time_s: float

    @classmethod
    def for_run(
        cls, spec: ExperimentSpec, outputs: list[str], wall_time_s: float,
    ) -> RunManifest:
        return cls(
            format_version=SUPPORTED_VERSION,
            tool=TOOL_NAME,
            version=__version__,
            spec=spec,
            outputs=tuple(outputs),
            wall_time_s=wall_time_s,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "format_version": self.format_version,
            "tool": self.tool,
            "version": self.version,
            "spec": self.spec.model_dump(mode="json"),
            "outputs": list(self.outputs),
            "wall_time_s": self.wall_time_s,
        }

    @classmethod
    def from_dict(cls, data: Any) -> RunManifest:
        if not isinstance(data, dict):
            raise ManifestValidationError("Manifest must be a dict")

        version = data.get("format_version")
        if version != SUPPORTED_VERSION:
            raise ManifestValidationError(
                f"Unsupported format_version {version!r} (expected {SUPPORTED_VERSION!r})"
            )
        for key in _REQUIRED:
            if key not in data:
                raise ManifestValidationError(f"Missing top-level field {key!r}")
        if data["tool"] != TOOL_NAME:
            raise ManifestValidationError(f"Manifest written by {data['tool']!r}, not {TOOL_NAME!r}")

        outputs = data["outputs"]
        if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
            raise ManifestValidationError("'outputs' must be a list of file names")
        wall_time = data["wall_time_s"]
        if not isinstance(wall_time, (int, float)) or wall_time < 0:
            raise ManifestValidationError("'wall_time_s' must be a non-negative number")

        try:
            spec = ExperimentSpec.model_validate(data["spec"])
        except ValidationError as exc:
            raise ManifestValidationError(f"Invalid spec echo: {exc}") from exc

        return cls(
            format_version=version,
            tool=data["tool"],
            version=str(data["version"]),
            spec=spec,
            outputs=tuple(outputs),
            wall_time_s=float(wall_time),
        )

    @classmethod
    def from_json(cls, text: str) -> RunManifest:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ManifestValidationError(f"Invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def write_manifest(manifest: RunManifest, out_dir: str | Path) -> Path:
    path = Path(out_dir) / MANIFEST_NAME
    export_dict(manifest.to_dict(), path)
    return path


def load_manifest(path: str | Path) -> RunManifest:
    """Read and validate a manifest file (or the manifest inside a run directory)."""
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestValidationError(f"Cannot read file: {exc}") from exc
    return RunManifest.from_json(text)
