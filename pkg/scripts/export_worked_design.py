#!/usr/bin/env python3
"""Write the worked pentapod design (with its sixth leg) as design JSON."""

import argparse
import json

from duporcq.geometry import design_to_dict, duporcq_hexapod, worked_design


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="worked_design.json")
    args = ap.parse_args()

    design = worked_design()
    hexapod = duporcq_hexapod(design)
    with open(args.out, "w") as fh:
        json.dump(design_to_dict(design, hexapod), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out}")
    print(f"  sixth vertex M6 = ({hexapod.M6.x}, {hexapod.M6.y}), "
          f"m6 = ({hexapod.m6.x}, {hexapod.m6.y})")


if __name__ == "__main__":
    main()
