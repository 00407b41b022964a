"""
Run the toolkit without installing the console script: ``python main.py <subcommand> ...``.
"""

from wbm.cli import main

if __name__ == "__main__":
    main()
