import sys

from horizon_risk.cli import main

sys.exit(main())
