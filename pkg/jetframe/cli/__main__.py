import sys

from jetframe.cli.main import main

sys.exit(main())
