import sys

from ctxspell.cli import main

sys.exit(main())
