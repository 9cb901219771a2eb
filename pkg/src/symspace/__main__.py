import sys

from symspace.cli import main

sys.exit(main())
