import sys

from ucycles.cli.module import main

sys.exit(main())
