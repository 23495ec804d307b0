import sys

from fracdyn.cli import main

sys.exit(main())
