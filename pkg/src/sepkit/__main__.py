import sys

from sepkit.cli import main

sys.exit(main())
