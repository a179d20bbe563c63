"""Drive the command line front end programmatically.

Run from the repository root:

    python3 demos/07_command_line.py

Each block mirrors a shell invocation of the installed `weylgeom`
entry point; the argument lists are exactly what the shell would pass.
"""

import contextlib
import io
import json

from weylgeom import cli


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


# weylgeom analyze --model sphere:m=3,r=1.0
code, out = run(["analyze", "--model", "sphere:m=3,r=1.0"])
print(f"$ weylgeom analyze --model sphere:m=3,r=1.0   (exit {code})")
print("\n".join(out.splitlines()[:12]))
print("...\n")

# weylgeom analyze --model fubini_study:n=4 --format json, one point
code, out = run(
    [
        "analyze",
        "--model", "fubini_study:n=4",
        "--point", "0.05,0.05,0.05,0.05,0.05,0.05,0.05,0.05",
        "--format", "json",
    ]
)
doc = json.loads(out)
verdict = doc["records"][0]["verdict"]
print(f"$ weylgeom analyze --model fubini_study:n=4 --format json   (exit {code})")
print(f"  verdict {verdict['kind']}, lambda1 = {verdict['lambda1']:.9f}\n")

# weylgeom verify --model fubini_study:n=2
code, out = run(["verify", "--model", "fubini_study:n=2", "--format", "json"])
doc = json.loads(out)
print(f"$ weylgeom verify --model fubini_study:n=2   (exit {code})")
print(f"  checks {doc['summary']['checks']}, failed {doc['summary']['failed']}\n")

# weylgeom spectrum --model complex_space_form:n=4,lambda0=1.0,lambda1=1.0
code, out = run(
    [
        "spectrum",
        "--model", "complex_space_form:n=4,lambda0=1.0,lambda1=1.0",
        "--samples", "4",
        "--format", "json",
    ]
)
doc = json.loads(out)
row = sorted(doc["records"][0]["spectra"][0])
print("$ weylgeom spectrum --model complex_space_form:n=4,lambda0=1.0,lambda1=1.0"
      f"   (exit {code})")
print(f"  one spectrum row: {[round(x, 6) for x in row]}")
