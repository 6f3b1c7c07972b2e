"""Golden transcript of the CLI corpus, determinism and exit codes.

Set HLCFT_REGEN_GOLDEN=1 to rewrite tests/golden/transcript.txt after an
intended output change.
"""
import io
import json
import os
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from hlcft.cli import EXIT_DOMAIN, EXIT_PARSE, read_config_file, run

GOLDEN = Path(__file__).parent / "golden"


def corpus():
    lines = (GOLDEN / "corpus.txt").read_text().splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def transcript(threads=None) -> str:
    chunks = []
    for line in corpus():
        argv = shlex.split(line)
        if threads is not None and argv[0] == "check":
            argv = [a for a in argv]
            if "--threads" in argv:
                argv[argv.index("--threads") + 1] = str(threads)
            else:
                argv += ["--threads", str(threads)]
        code, out, err = invoke(argv)
        chunks.append(f"$ hlcft {line}\n{out}{err}exit={code}\n")
    return "\n".join(chunks)


def test_golden_transcript():
    got = transcript()
    path = GOLDEN / "transcript.txt"
    if os.environ.get("HLCFT_REGEN_GOLDEN"):
        path.write_text(got)
    assert got == path.read_text()


def test_byte_identical_across_runs_and_threads():
    first = transcript()
    assert transcript() == first
    assert transcript(threads=1) == transcript(threads=4)


def test_spec_examples():
    assert invoke(["val", "{t2,t1}", "--n", "2"])[1] == "val=1\n"
    assert invoke(["pair", "{1+t1}", "w(t1^-1)", "--r", "1"])[1] == "pair=1 mod 2\npair_limit=1/2\n"
    assert invoke(["tame", "{g, t1}", "--p", "3"])[1] == "tame=g^1\n"


def test_exit_codes():
    code, out, err = invoke(["val", "{t1,}"])
    assert code == EXIT_PARSE == 3 and "column 5" in err and out == ""
    assert invoke(["val", "{0}"])[0] == EXIT_DOMAIN == 2
    assert invoke(["check", "no-such-suite"])[0] == EXIT_DOMAIN
    with pytest.raises(SystemExit) as e:
        invoke(["frobnicate"])
    assert e.value.code == 2


def test_json_is_valid():
    code, out, _ = invoke(["recip", "{t1}", "--query", "w(1)", "--json"])
    assert code == 0
    assert json.loads(out)["ur_exponent"] == 1


def test_negative_window_syntax():
    code, out, _ = invoke(["val", "{t1}", "--window=-4:4"])
    assert (code, out) == (0, "val=1\n")


def test_config_file(tmp_path):
    cfg = tmp_path / "field.cfg"
    cfg.write_text("# a field\np = 3\nn = 2\nwindow = 2\n")
    assert read_config_file(str(cfg))["p"] == 3
    assert invoke(["tame", "{g, t1, t2}", "--config", str(cfg)])[1] == "tame=g^1\n"
    # flags win over the file
    assert invoke(["val", "{t1}", "--config", str(cfg), "--n", "1"])[1] == "val=1\n"
    assert invoke(["val", "{t1}", "--config", str(tmp_path / "missing")])[0] == EXIT_DOMAIN


def test_console_script_subprocess():
    proc = subprocess.run([sys.executable, "-m", "hlcft.cli", "val", "{t2, t1}", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "val=1\n"
