import sys

from rankembed.cli import main

sys.exit(main())
