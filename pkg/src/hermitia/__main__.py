import sys

from hermitia.cli import main

sys.exit(main())
