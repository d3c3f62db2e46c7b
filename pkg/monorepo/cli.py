import os
import subprocess
import sys


REPO = os.path.dirname(os.path.dirname(__file__))
PY_DIR = os.path.join(REPO, "packages", "python")
CORPUS_JOBS = os.environ.get("CORPUS_JOBS", str(os.cpu_count() or 1))


def _run(cmd: list[str], cwd: str | None = None) -> int:
    print("$", " ".join(cmd))
    return subprocess.call(cmd, cwd=cwd or REPO)


def _prepare() -> int:
    code = 0
    code |= _run(["poetry", "-C", PY_DIR, "env", "use", sys.executable])
    code |= _run(["poetry", "-C", PY_DIR, "install"])
    return code


def build_all() -> None:
    code = _prepare()
    code |= _run(["poetry", "-C", PY_DIR, "build"])
    sys.exit(code)


def test_python() -> None:
    code = _prepare()
    code |= _run(["poetry", "-C", PY_DIR, "run", "pytest", "-q"])
    sys.exit(code)


def test_fast() -> None:
    """Unit and corpus tests without the slow-marked family runs."""
    code = _prepare()
    code |= _run(["poetry", "-C", PY_DIR, "run", "pytest", "-q", "-m", "not slow"])
    sys.exit(code)


def corpus() -> None:
    code = _prepare()
    code |= _run(["poetry", "-C", PY_DIR, "run", "fusionkit", "corpus", "run", "--jobs", CORPUS_JOBS, *sys.argv[1:]])
    sys.exit(code)


def ci() -> None:
    """CI-friendly composite: install, full test suite, then the corpus gate."""
    code = _prepare()
    code |= _run(["poetry", "-C", PY_DIR, "lock", "--no-update"])
    code |= _run(["poetry", "-C", PY_DIR, "run", "pytest", "-q"])
    code |= _run(["poetry", "-C", PY_DIR, "run", "fusionkit", "corpus", "run", "--jobs", CORPUS_JOBS])
    sys.exit(code)
