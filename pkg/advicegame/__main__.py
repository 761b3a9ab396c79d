import sys

from advicegame._cli import main

sys.exit(main())
