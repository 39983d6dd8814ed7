#!/usr/bin/python
# -*- coding: utf-8 -*-

# Copyright: (c) 2026, ftag contributors
# MIT License (see LICENSE)

"""``ftag`` entry point: dispatches to one command module per subcommand."""

import sys

from library import ftag_adversary, ftag_simulate, ftag_solve, ftag_verify

COMMANDS = {
    "solve": ftag_solve,
    "simulate": ftag_simulate,
    "adversary": ftag_adversary,
    "verify": ftag_verify,
}

USAGE = """usage: ftag {solve,simulate,adversary,verify} [options]

  solve      offline optimum of an instance
  simulate   run an online strategy on an instance or a random suite
  adversary  play the lower-bound adversary against a strategy
  verify     run the acceptance checks

Run 'ftag COMMAND --help' for the options of a command.
"""


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(USAGE)
        sys.exit(0 if argv else 2)
    command = COMMANDS.get(argv[0])
    if command is None:
        sys.stderr.write(USAGE)
        sys.stderr.write("ftag: error: unknown command %r\n" % argv[0])
        sys.exit(2)
    command.main(argv[1:])


if __name__ == "__main__":
    main()
