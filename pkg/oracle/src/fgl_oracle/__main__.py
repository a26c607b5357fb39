"""Read a job config as JSON on stdin, write a report as JSON on stdout."""

import json
import sys

from fgl_oracle import run_config


def main():
    config = json.load(sys.stdin)
    report = run_config(config)
    json.dump(report, sys.stdout, separators=(",", ":"))
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
