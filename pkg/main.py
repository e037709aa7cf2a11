import sys
from dotenv import load_dotenv

from magnomech.cli import main

# MAGNOMECH_WORKERS / MAGNOMECH_OUTPUT_DIR
load_dotenv()

if __name__ == "__main__":
    sys.exit(main())
