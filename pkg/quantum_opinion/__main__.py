import sys

from quantum_opinion.cli import main

sys.exit(main())
