import sys

from budge.cli import main

sys.exit(main())
