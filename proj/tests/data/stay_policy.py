#!/usr/bin/env python3
"""Minimal external controller: reads observations, always stands still."""
import sys

for _ in sys.stdin:
    sys.stdout.write('{"actions":[]}\n')
    sys.stdout.flush()
