import sys

from bellowlab.cli import main

sys.exit(main())
