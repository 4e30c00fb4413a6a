import sys

from uur.main import main

sys.exit(main())
