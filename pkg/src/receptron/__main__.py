import sys

from receptron.cli import main

sys.exit(main())
