#!/usr/bin/env python3
"""
Report utilities for status output, file management, and run manifests.

This module provides reusable functions for writing machine-readable
outputs (JSON, CSV) deterministically, embedding run manifests, and
rendering Markdown report sections shared by the benchmark report.
"""

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, List, Optional

import click
import numpy as np
import yaml

from manifold_rectify import __version__


def status(message: str) -> None:
    """
    Print a human status line to standard error.

    Standard output is reserved for each command's single summary line,
    so progress, warnings and hints all go through here.

    Example:
        status("✅ Loaded default configuration")
    """
    click.echo(message, err=True)


def ensure_reports_directory(reports_dir: str = "Reports") -> str:
    """
    Ensure the reports directory exists, create if it doesn't.

    Args:
        reports_dir: Directory name for reports

    Returns:
        str: Path to the reports directory
    """
    os.makedirs(reports_dir, exist_ok=True)
    return reports_dir


def generate_filename(prefix: str, tag: str, extension: str = "json") -> str:
    """
    Generate a standardized filename for outputs.

    Args:
        prefix: Filename prefix (e.g., 'cleaning_report', 'benchmark')
        tag: Identifier for the run, usually the input file stem
        extension: File extension (default: 'json')

    Returns:
        str: Generated filename

    Example:
        filename = generate_filename('cleaning_report', 'intrusion')
        # Returns: 'cleaning_report_intrusion.json'
    """
    safe_tag = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in tag)
    return f"{prefix}_{safe_tag}.{extension}"


def save_report(content: str, filename: str, reports_dir: str = "Reports") -> str:
    """
    Save report content to a file in the reports directory.

    Args:
        content: Report content to save
        filename: Filename for the report (must not contain path separators or '..')
        reports_dir: Directory to save reports in

    Returns:
        str: Full path to the saved file

    Raises:
        ValueError: If filename contains path traversal or path separators.
    """
    if not filename or os.path.basename(filename) != filename or ".." in filename:
        raise ValueError(
            f"Invalid filename: must be a simple filename without path separators or '..'. Got {filename!r}"
        )
    reports_path = ensure_reports_directory(reports_dir)
    filepath = os.path.join(reports_path, filename)

    with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
        f.write(content)

    status(f"📄 Report saved to: {filepath}")
    return filepath


def resolve_output_path(explicit: Optional[str], reports_dir: str, filename: str) -> str:
    """Return the explicit path if given, else ``reports_dir/filename`` (directory created)."""
    if explicit:
        parent = os.path.dirname(explicit)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return explicit
    return os.path.join(ensure_reports_directory(reports_dir), filename)


def file_digest(path: str) -> str:
    """
    Compute a 64-bit content hash of a file.

    Returns:
        str: First 16 hex characters of the SHA-256 of the file bytes
    """
    hash_obj = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b''):
            hash_obj.update(chunk)
    return hash_obj.hexdigest()[:16]


def generate_config_hash(config: Dict[str, Any]) -> str:
    """
    Generate a stable hash of the configuration for change detection.

    The hash is computed over a sorted YAML representation to ensure
    deterministic results regardless of dict ordering.

    Returns:
        str: Short SHA256 hash (first 8 characters)
    """
    yaml_str = yaml.dump(to_jsonable(config), default_flow_style=False, sort_keys=True)
    return hashlib.sha256(yaml_str.encode('utf-8')).hexdigest()[:8]


def to_jsonable(obj: Any) -> Any:
    """
    Convert numpy scalars/arrays, tuples and sets into plain JSON values.

    Non-finite floats become None so the output stays strict JSON.
    """
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(item) for item in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(item) for item in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


def dumps_json(payload: Any) -> str:
    """Serialize to deterministic JSON text (sorted keys, 2-space indent, trailing newline)."""
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(payload: Any, path: str) -> str:
    """Write ``payload`` as deterministic JSON to ``path``."""
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps_json(payload))
    return path


@dataclass
class RunManifest:
    """Provenance block embedded in every JSON output."""
    tool_version: str
    command: str
    config: Dict[str, Any]
    input_digests: Dict[str, str] = field(default_factory=dict)
    seeds: List[int] = field(default_factory=list)
    resolved_metric: Optional[str] = None
    timestamp: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return to_jsonable(asdict(self))


def _manifest_timestamp(stamp_time: bool) -> Optional[str]:
    epoch = os.getenv('SOURCE_DATE_EPOCH')
    if epoch:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')
    if stamp_time:
        return datetime.now(timezone.utc).strftime('%Y-%m-%dT%H:%M:%SZ')
    return None


def build_manifest(
    command: str,
    config: Dict[str, Any],
    inputs: Iterable[str] = (),
    seeds: Iterable[int] = (),
    resolved_metric: Optional[str] = None,
    stamp_time: bool = False,
) -> RunManifest:
    """
    Build the run manifest for a command invocation.

    Args:
        command: CLI command name
        config: Fully resolved configuration used by the run
        inputs: Input file paths to digest
        seeds: Seeds used by the run
        resolved_metric: Metric after adaptive resolution, if any
        stamp_time: Record wall-clock time (breaks byte-identical reruns)

    Returns:
        RunManifest: Manifest ready for embedding
    """
    digests = {os.path.basename(path): file_digest(path) for path in inputs}
    return RunManifest(
        tool_version=__version__,
        command=command,
        config=to_jsonable(config),
        input_digests=digests,
        seeds=[int(seed) for seed in seeds],
        resolved_metric=resolved_metric,
        timestamp=_manifest_timestamp(stamp_time),
    )


def render_active_config(config: Dict[str, Any]) -> str:
    """
    Render active configuration as a collapsible Markdown block.

    Only rendered when ``report.show_active_config`` is enabled.
    """
    if not config.get('report', {}).get('show_active_config', False):
        return ""

    config_hash = generate_config_hash(config)
    yaml_output = yaml.dump(to_jsonable(config), default_flow_style=False, sort_keys=True, indent=2)

    return f"""
---

<details>
<summary>📋 Active Configuration</summary>

```yaml
# Configuration Hash: {config_hash}

{yaml_output}```

</details>
"""


def render_glossary(entries: Dict[str, str]) -> str:
    """
    Render a glossary section from term definitions.

    Metric names are converted to kebab-case anchors; entries are sorted.
    """
    if not entries:
        return ""

    def to_anchor(name: str) -> str:
        return name.lower().replace(' ', '-').replace('/', '-')

    glossary_lines = [
        "## 📚 Glossary",
        ""
    ]

    for name in sorted(entries.keys()):
        glossary_lines.extend([
            f"**<a id=\"{to_anchor(name)}\"></a>{name}:** {entries[name]}",
            ""
        ])

    return "\n".join(glossary_lines)
