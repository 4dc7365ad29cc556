#!/usr/bin/env python3
"""Minimal external engine speaking the NDJSON bridge protocol.

Answers every query with one bin per binning dimension, keyed by the
dimension's column name, whose estimate is the number of filter atoms
the query carried. Modes (argv[1]): "malformed" answers queries with
junk, "slow" sleeps 300 ms first.
"""
import json
import sys
import time

mode = sys.argv[1] if len(sys.argv) > 1 else "normal"

for line in sys.stdin:
    msg = json.loads(line)
    op = msg.get("op")
    if op == "setup":
        print(json.dumps({"id": msg["id"], "ok": True}), flush=True)
    elif op == "query":
        if mode == "malformed":
            print("!!not json!!", flush=True)
            continue
        if mode == "slow":
            time.sleep(0.3)
        bins = [{"key": [dim["column"]], "estimate": float(len(msg["filter"]))}
                for dim in msg["viz"]["binning"]]
        print(json.dumps({"id": msg["id"], "bins": bins, "progress": 1.0}),
              flush=True)
    # link / delete / start / end carry no reply
