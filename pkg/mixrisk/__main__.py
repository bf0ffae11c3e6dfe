import sys

from mixrisk.cli import main

sys.exit(main())
