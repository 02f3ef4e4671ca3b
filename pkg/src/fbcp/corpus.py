"""Golden-file regression corpus.

Layout::

    corpus/<tag>/<case>.bog            spec file; ``#! ARGS`` lines are invocations
    corpus/<tag>/<case>.expected.txt   text output of every invocation
    corpus/<tag>/<case>.expected.json  JSON output of every invocation
    corpus/MANIFEST                    ``tag: case case ...`` coverage lines

In an invocation ``@`` stands for the case's own ``.bog`` file.  Each
invocation is run twice, once plain and once with ``--json``.
"""

from __future__ import annotations

import difflib
import io
import json
import shlex
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FbcpError

SUFFIX = ".bog"


class CorpusError(FbcpError):
    pass


def default_root() -> Path:
    here = Path.cwd() / "corpus"
    if here.is_dir():
        return here
    return Path(__file__).resolve().parents[2] / "corpus"


@dataclass(frozen=True)
class GoldenCase:
    path: Path
    invocations: tuple  # tuple of argv tuples, with "@" still symbolic

    @property
    def name(self) -> str:
        return f"{self.path.parent.name}/{self.path.stem}"

    @property
    def expected_txt(self) -> Path:
        return self.path.with_suffix(".expected.txt")

    @property
    def expected_json(self) -> Path:
        return self.path.with_suffix(".expected.json")

    def argv(self, inv) -> list:
        # relative file name keeps outputs independent of the checkout path
        return [self.path.name if a == "@" else a for a in inv]


def load_case(path: Path) -> GoldenCase:
    invs = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#!"):
            invs.append(tuple(shlex.split(line[2:])))
    if not invs:
        raise CorpusError(f"{path}: no '#!' invocation lines")
    return GoldenCase(path, tuple(invs))


def discover(root: Path) -> list:
    return [load_case(p) for p in sorted(root.glob(f"*/*{SUFFIX}"))]


def _invoke(argv, cwd: Path):
    from .cli import run

    out, err = io.StringIO(), io.StringIO()
    code = run([str(cwd / a) if a.endswith(SUFFIX) else a for a in argv], out, err)
    # diagnostics may contain the absolute path; strip it
    text = err.getvalue().replace(str(cwd) + "/", "")
    return code, out.getvalue(), text


def render_case(case: GoldenCase) -> tuple:
    """(text, json) outputs of every invocation of the case."""
    cwd = case.path.parent
    txt, docs = [], []
    for inv in case.invocations:
        argv = case.argv(inv)
        code, out, err = _invoke(argv, cwd)
        txt.append(f"$ fbcp {shlex.join(argv)}\n{out}{err}[exit {code}]\n")
        code, out, err = _invoke(["--json"] + argv, cwd)
        try:
            body = json.loads(out) if out else None
        except json.JSONDecodeError:
            raise CorpusError(f"{case.name}: --json output is not one JSON document") from None
        docs.append({"argv": argv, "exit": code, "output": body, "stderr": err})
    return "\n".join(txt), json.dumps(docs, indent=2) + "\n"


@dataclass
class CaseResult:
    name: str
    ok: bool
    diff: str = ""


@dataclass
class Summary:
    results: list = field(default_factory=list)
    blessed: bool = False
    coverage_missing: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results) and not self.coverage_missing

    def first_failure(self):
        return next((r for r in self.results if not r.ok), None)

    def render(self) -> str:
        lines = [f"{'BLESS' if self.blessed else ('ok' if r.ok else 'FAIL')}  {r.name}"
                 for r in self.results]
        for tag in self.coverage_missing:
            lines.append(f"FAIL  coverage: no case for {tag}")
        bad = self.first_failure()
        if bad is not None:
            lines.append("")
            lines.append(f"first divergence in {bad.name}:")
            lines.append(bad.diff.rstrip())
        n_ok = sum(r.ok for r in self.results)
        lines.append(f"{n_ok}/{len(self.results)} cases passed")
        return "\n".join(lines)

    def to_json(self) -> dict:
        bad = self.first_failure()
        return {
            "passed": self.passed,
            "blessed": self.blessed,
            "cases": [{"name": r.name, "ok": r.ok} for r in self.results],
            "coverage_missing": self.coverage_missing,
            "first_divergence": None if bad is None else {"name": bad.name, "diff": bad.diff},
        }


def _diff(expected: str, actual: str, label: str) -> str:
    return "".join(difflib.unified_diff(expected.splitlines(True), actual.splitlines(True),
                                        f"{label} (expected)", f"{label} (actual)"))


def check_case(case: GoldenCase, bless: bool = False) -> CaseResult:
    txt, js = render_case(case)
    if bless:
        case.expected_txt.write_text(txt, encoding="utf-8")
        case.expected_json.write_text(js, encoding="utf-8")
        return CaseResult(case.name, True)
    for path, actual in ((case.expected_txt, txt), (case.expected_json, js)):
        expected = path.read_text(encoding="utf-8") if path.exists() else ""
        if expected != actual:
            return CaseResult(case.name, False, _diff(expected, actual, path.name))
    return CaseResult(case.name, True)


def read_manifest(root: Path) -> dict:
    """tag -> list of case names (``dir/stem``)."""
    out = {}
    path = root / "MANIFEST"
    if not path.exists():
        return out
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tag, _, cases = line.partition(":")
        out[tag.strip()] = cases.split()
    return out


def missing_coverage(root: Path, cases) -> list:
    names = {c.name for c in cases}
    return [tag for tag, listed in read_manifest(root).items()
            if not listed or any(n not in names for n in listed)]


def run_corpus(root=None, bless: bool = False, jobs: int = 1) -> Summary:
    root = Path(root) if root is not None else default_root()
    if not root.is_dir():
        raise CorpusError(f"corpus directory {root} not found")
    cases = discover(root)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(lambda c: check_case(c, bless), cases))
    # pool.map keeps input order, so reports are canonical
    return Summary(results, bless, missing_coverage(root, cases))
