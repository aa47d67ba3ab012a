import sys

from skewlab.cli import main

sys.exit(main())
