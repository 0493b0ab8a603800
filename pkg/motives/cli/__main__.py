"""Entry point: `python -m motives.cli`."""

from motives.cli.main import main

if __name__ == "__main__":
    raise SystemExit(main())
