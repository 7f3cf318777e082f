"""Attack graph model, scoring and tool runner for reconnaissance scans."""

from ._core import (
    Error,
    Graph,
    canonical_key,
    destination_weight,
    ffuf_invocation,
    nmap_invocation,
    parse_ffuf_json,
    parse_nmap_xml,
    replay,
)

__all__ = [
    "Error",
    "Graph",
    "canonical_key",
    "destination_weight",
    "ffuf_invocation",
    "nmap_invocation",
    "parse_ffuf_json",
    "parse_nmap_xml",
    "replay",
]
