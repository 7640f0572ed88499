"""
Run manifest

manifest.json in the output directory lists, per command, the files it wrote
with their blob hashes, plus one summary row per fitted quantity. Commands run
against the same directory update their own entries.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from ... import __version__
from ...errors import ManifestIntegrityError
from .reader import blob_hash

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


@dataclass
class FitSummary:
    """One row of the acceptance table."""

    name: str
    value: Optional[float]
    predicted: Optional[float] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    command: str = ""

    @property
    def key(self) -> str:
        """Manifest key; the same fit name may come from several commands."""
        return f"{self.command}/{self.name}"


@dataclass
class CommandRecord:
    command: str
    started: str
    finished: str
    seed: int
    threads: int
    outputs: Dict[str, str] = field(default_factory=dict)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def file_hash(path: str) -> str:
    with open(path, "rb") as handle:
        return blob_hash(handle.read())


@dataclass
class RunManifest:
    """Provenance of everything written to one output directory."""

    config_hash: str
    config_path: str = ""
    version: str = __version__
    created: str = field(default_factory=_now)
    commands: Dict[str, CommandRecord] = field(default_factory=dict)
    fits: Dict[str, FitSummary] = field(default_factory=dict)

    @classmethod
    def load(cls, output_dir: str) -> Optional["RunManifest"]:
        path = os.path.join(output_dir, MANIFEST_NAME)
        if not os.path.exists(path):
            return None
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
        return cls(
            config_hash=data["config_hash"],
            config_path=data.get("config_path", ""),
            version=data.get("version", ""),
            created=data.get("created", ""),
            commands={k: CommandRecord(**v) for k, v in data.get("commands", {}).items()},
            fits={k: FitSummary(**v) for k, v in data.get("fits", {}).items()},
        )

    @classmethod
    def open(cls, output_dir: str, config_hash: str, config_path: str = "") -> "RunManifest":
        """Existing manifest for the same config, or a fresh one."""
        existing = cls.load(output_dir)
        if existing is not None and existing.config_hash == config_hash:
            return existing
        if existing is not None:
            logger.warning(
                "Config changed since the last run in %s; starting a new manifest", output_dir
            )
        return cls(config_hash=config_hash, config_path=config_path)

    def record(
        self,
        command: str,
        started: str,
        output_dir: str,
        paths: List[str],
        seed: int,
        threads: int,
    ) -> CommandRecord:
        outputs = {
            os.path.relpath(path, output_dir).replace(os.sep, "/"): file_hash(path)
            for path in paths
        }
        entry = CommandRecord(
            command=command,
            started=started,
            finished=_now(),
            seed=seed,
            threads=threads,
            outputs=outputs,
        )
        self.commands[command] = entry
        return entry

    def add_fit(self, summary: FitSummary) -> None:
        self.fits[summary.key] = summary

    def save(self, output_dir: str) -> str:
        path = os.path.join(output_dir, MANIFEST_NAME)
        payload: Dict[str, Any] = {
            "config_hash": self.config_hash,
            "config_path": self.config_path,
            "version": self.version,
            "created": self.created,
            "commands": {k: asdict(v) for k, v in sorted(self.commands.items())},
            "fits": {k: asdict(v) for k, v in sorted(self.fits.items())},
        }
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
        return path

    def verify(self, output_dir: str) -> List[str]:
        """Recompute every listed hash.

        Raises:
            ManifestIntegrityError: A listed file is missing or its hash changed
        """
        problems = []
        checked = []
        for record in self.commands.values():
            for relative, expected in record.outputs.items():
                path = os.path.join(output_dir, relative)
                if not os.path.exists(path):
                    problems.append(f"{relative}: missing")
                elif file_hash(path) != expected:
                    problems.append(f"{relative}: hash mismatch")
                else:
                    checked.append(relative)
        if problems:
            raise ManifestIntegrityError("manifest verification failed: " + "; ".join(problems))
        return checked
