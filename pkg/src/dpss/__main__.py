import sys

from dpss.cli import main

sys.exit(main())
