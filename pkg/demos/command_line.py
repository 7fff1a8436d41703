"""
Driving the command line from Python
====================================

The ``nondet`` command reads a JSON structure file or a guarded-command
program.  ``main`` returns the exit code, so it can be called directly.
"""

from pathlib import Path

from nondet.frontend.cli import main

data = Path(__file__).parent / "data"

main(["analyze", str(data / "t3.json")])
main(["runs", str(data / "t3.json"), "--from", "a", "--max-len", "1", "--format", "text"])
main(["basin", str(data / "walk.json"), "--target", '["0"]'])
main(["wp", str(data / "gcd.gcl"), "--post", "x == y && x <= 2"])
main(["check", str(data / "gcd.gcl"), "--invariant", "x > 0 && y > 0"])

# unknown state: exit code 2
print("exit", main(["runs", str(data / "t3.json"), "--from", "d", "--max-len", "1"]))
