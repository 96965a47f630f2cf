"""
Config ingestion for the CLI and scripts.

A config is a flat document with one key per ProtocolParams field, in
JSON or YAML. ``--override key=value`` pairs are layered on top; values
go through ``yaml.safe_load`` so numbers, mappings and strings all parse,
and the merged mapping is validated again as a whole.
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import yaml

from src.protocol.errors import ParameterDomainError
from src.protocol.params import ProtocolParams


def load_config(config_path: str) -> dict:
    path = Path(config_path)
    if not path.is_file():
        raise ParameterDomainError(f"config file not found: {path}", "config")
    with open(path) as f:
        if path.suffix.lower() == ".json":
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise ParameterDomainError(f"{path}: invalid JSON ({exc})", "config") from exc
        else:
            try:
                data = yaml.safe_load(f)
            except yaml.YAMLError as exc:
                raise ParameterDomainError(f"{path}: invalid YAML ({exc})", "config") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ParameterDomainError(f"{path}: config must be a mapping of parameters", "config")
    return data


def parse_overrides(pairs: Optional[Iterable[str]]) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    for pair in pairs or ():
        key, sep, raw = pair.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ParameterDomainError(f"override must look like key=value, got {pair!r}", "override")
        try:
            overrides[key] = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ParameterDomainError(f"override {key}: cannot parse {raw!r}", key) from exc
    return overrides


def build_params(
    config_path: Optional[str] = None,
    overrides: Optional[Iterable[str]] = None,
    base: Optional[ProtocolParams] = None,
) -> ProtocolParams:
    """Config file (or ``base``) first, then overrides; validated once merged."""
    data: Dict[str, Any] = base.model_dump() if base is not None else {}
    if config_path:
        data.update(load_config(config_path))
    data.update(parse_overrides(overrides))
    return ProtocolParams.from_mapping(data)
