import sys

from rocbound.cli import main

sys.exit(main())
