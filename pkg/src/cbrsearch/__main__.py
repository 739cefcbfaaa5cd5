"""Module entry point: ``python -m cbrsearch``."""

from .cli import entry

if __name__ == "__main__":
    entry()
