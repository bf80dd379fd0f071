"""Exit-code and artifact checks for the contactlax executable."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

EXE = sys.argv[1]
failures = []


def run(*args, expect):
    proc = subprocess.run([EXE, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc


def report(proc):
    return json.loads(proc.stdout)


with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)

    r = report(run("derive", "--family", "rat", "-m", "1", "-n", "1", "--out", str(d / "rat.json"),
                   "--latex", str(d / "rat.tex"), expect=0))
    assert r["details"]["determinedness"]["equations"] == 4
    assert json.loads((d / "rat.json").read_text())["unknowns"] == ["a1", "v1", "b1", "w1"]
    assert "\\begin{align*}" in (d / "rat.tex").read_text()

    r = report(run("derive", "--family", "ratgp", "-m", "1", "-n", "1", expect=0))
    assert r["details"]["determinedness"]["equations"] == 5
    assert r["details"]["determinedness"]["verdict"] == "underdetermined"

    run("derive", "--family", "poly", "-m", "0", "-n", "1", expect=2)
    run("derive", "--family", "nope", expect=2)
    run("verify", "frobnicate", expect=2)
    run(expect=2)

    assert report(run("verify", "qsolution", expect=0))["verdicts"]["qsolution"] == "pass"
    run("verify", "ab", "--a0", "x", "--b0", "y", expect=1)
    t1 = report(run("verify", "theorem1", "-m", "1", "-n", "1", expect=0))
    assert t1["details"]["validating_general"] == ["solved"]
    rls = report(run("verify", "rls", "-m", "1", "-n", "1", expect=0))
    assert rls["verdicts"]["rls"] in ("pass", "mismatch-reported")
    assert report(run("verify", "reduce21", expect=0))["verdicts"]["reduce21"] == "pass"

    run("derive", "--family", "rat", "--form", "residues", "--out", str(d / "res.json"), expect=0)
    ck = report(run("ck", "--in", str(d / "res.json"), "--out", str(d / "ck.json"), expect=0))
    assert ck["details"]["witness"]["determinant"] != "0"
    run("reduce21", "--family", "ratgp", "--out", str(d / "r21.json"), expect=0)

    (d / "const.json").write_text(json.dumps(
        {"fields": {"a1": {"constant": 1.0}, "b1": {"constant": -0.5}, "v1": {"constant": 0.0},
                    "w1": {"constant": 1.5}}}))
    sim = report(run("simulate", "--system", str(d / "ck.json"), "--init", str(d / "const.json"), "--grid", "8",
                     "--steps", "100", "--dt", "0.01", "--monitor", str(d / "mon.csv"), "--drift-tol", "1e-13",
                     expect=0))
    assert sim["details"]["relative_drift"] <= 1e-13
    lines = (d / "mon.csv").read_text().splitlines()
    assert lines[0] == "step,T,min_pole_dist,residual_L2,max_field" and len(lines) == 102

    (d / "near.json").write_text(json.dumps({"a1": 1, "b1": 1, "v1": 0, "w1": 0.05}))
    run("simulate", "--init", str(d / "near.json"), "--grid", "8", expect=3)
    run("simulate", "--grid", "4", "--init", str(d / "const.json"), expect=2)

    run("export", "--family", "rat", "--what", "cc", "--out", str(d / "cc.json"), expect=0)
    assert "num" in json.loads((d / "cc.json").read_text())
    tex = run("export", "--in", str(d / "rat.json"), "--format", "latex", expect=0).stdout
    assert tex.startswith("\\begin{align*}")

if failures:
    print("\n".join(failures))
    sys.exit(1)
print("cli smoke: ok")
