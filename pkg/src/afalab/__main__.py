from afalab.cli import main
import sys

sys.exit(main())
