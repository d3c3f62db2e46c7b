import subprocess, os, sys

PY_DIR = os.path.join(os.path.dirname(__file__), "..", "packages", "python")


def _run(cmd: list[str], cwd: str):
    print(">>", " ".join(cmd), flush=True)
    subprocess.check_call(cmd, cwd=cwd)


def test():
    _run(["poetry", "install"], cwd=PY_DIR)
    _run(["poetry", "run", "pytest", "-q"], cwd=PY_DIR)


def build():
    _run(["poetry", "build"], cwd=PY_DIR)


def corpus():
    _run(["poetry", "run", "fusionkit", "corpus", "run", *sys.argv[1:]], cwd=PY_DIR)


def families():
    # reproduce the two example families end to end
    _run(["poetry", "run", "fusionkit", "family", "agl", "--p", "3", "--n", "2", "--validate"], cwd=PY_DIR)
    _run(["poetry", "run", "fusionkit", "family", "agl", "--p", "2", "--n", "3", "--validate"], cwd=PY_DIR)
    _run(["poetry", "run", "fusionkit", "family", "sl23", "--validate"], cwd=PY_DIR)
