"""JSON schemas for every ``--json`` document, one file per subcommand."""

import json
from importlib import resources

NAMES = ("classify", "compare", "present", "freedim", "cumulants", "basis-change", "nc", "corpus", "error")


def load(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(name)
    return json.loads(resources.files(__name__).joinpath(f"{name}.json").read_text(encoding="utf-8"))
