#!/usr/bin/env python3
"""Start the calibration service on localhost.

Usage: python3 scripts/run_service.py --images DIR --records DIR [--port 8321]
"""
import sys

from emovis.service import main

if __name__ == "__main__":
    sys.exit(main())
