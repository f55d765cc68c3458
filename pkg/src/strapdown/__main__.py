from strapdown.cli import main
import sys

sys.exit(main())
