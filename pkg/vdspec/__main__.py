import sys
from vdspec.vd_cli import main

sys.exit(main())
