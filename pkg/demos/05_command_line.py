"""
Driving everything from the command line
========================================

The same steps through the ``zeroshift`` command: build a code file, check it,
push it through a simulated channel, and print capacity tables.
"""

import os
import subprocess
import sys
import tempfile


def zeroshift(*args):
    cmd = [sys.executable, "-m", "zeroshift", *args]
    print("$ zeroshift " + " ".join(args))
    proc = subprocess.run(cmd, capture_output=True, text=True)
    lines = proc.stdout.splitlines()
    for line in lines[:8]:
        print("  " + line)
    if len(lines) > 8:
        print(f"  ... {len(lines) - 8} more lines")
    for line in proc.stderr.splitlines():
        print("  (stderr) " + line)
    print(f"  exit {proc.returncode}\n")


with tempfile.TemporaryDirectory() as tmp:
    shift_file = os.path.join(tmp, "shift.code")
    queue_file = os.path.join(tmp, "queue.code")

    zeroshift("capacity", "--channel", "shift", "--P", "1", "--K", "1")
    zeroshift("capacity", "--channel", "queue", "--P", "3", "--K", "1", "--Ekappa", "0.5", "--format", "json")

    zeroshift("construct", "--channel", "shift", "--K", "1", "--n", "9", "--W", "2", "-o", shift_file)
    zeroshift("verify", shift_file)
    zeroshift("verify", shift_file, "--channel", "shift", "--K", "2")
    zeroshift("simulate", shift_file, "--trials", "20000", "--seed", "7")

    zeroshift("construct", "--channel", "queue", "--phi", "0.2,0.3,0.5", "--n", "10", "--W", "2",
              "-o", queue_file)
    zeroshift("simulate", queue_file, "--trials", "20000", "--seed", "7")

    zeroshift("sweep", "--P", "1:4", "--K", "0:10")
    zeroshift("table", "--P", "1", "--K", "1", "--nmin", "395", "--nmax", "400")
