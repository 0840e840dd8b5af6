#!/usr/bin/env python3
# Copyright 2026 The dehum-bench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reads the gateway with pymodbus, a stock third-party Modbus TCP client."""

import argparse
import sys

from pymodbus.client import ModbusTcpClient

ILLEGAL_DATA_ADDRESS = 2

# Measured values the fig4c preset must show on the wire.
ST1_WORD = 5450  # 54.50 degC
SU1_WORD = 5190  # 51.90 %RH


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, required=True)
    ap.add_argument("--unit", type=int, default=1)
    ap.add_argument("--expect", required=True, help="12 comma-separated words for 4000..4011")
    args = ap.parse_args()
    expect = [int(w) for w in args.expect.split(",")]

    client = ModbusTcpClient(args.host, port=args.port, timeout=3)
    if not client.connect():
        print(f"cannot connect to {args.host}:{args.port}")
        return 1
    problems = []
    try:
        rr = client.read_holding_registers(4000, count=12, device_id=args.unit)
        if rr.isError():
            problems.append(f"map read failed: {rr}")
        else:
            got = list(rr.registers)
            if got != expect:
                problems.append(f"map read {got} != {expect}")
            if got[3] != ST1_WORD or got[4] != SU1_WORD:
                problems.append(f"ST1/SU1 words {got[3]}/{got[4]}")

        outside = [(3999, 1), (4012, 1), (4011, 2), (0, 12)]
        for address, count in outside:
            rr = client.read_holding_registers(address, count=count, device_id=args.unit)
            code = getattr(rr, "exception_code", None)
            if not rr.isError() or code != ILLEGAL_DATA_ADDRESS:
                problems.append(f"read {address}+{count}: expected IllegalDataAddress, got {rr}")
    finally:
        client.close()

    for p in problems:
        print(p)
    if problems:
        return 1
    print(f"pymodbus read 4000-4011 on unit {args.unit} matched; "
          f"{len(outside)} out-of-map reads gave IllegalDataAddress")
    return 0


if __name__ == "__main__":
    sys.exit(main())
