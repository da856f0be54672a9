#!/usr/bin/env python3
"""Convert an IU X-ray annotation.json (the common {train/val/test:
[{id, report, ...}]} layout) into the corpus JSON-lines format:

    {"study_id": ..., "split": "train"|"test", "text": ...}

Usage:
    python3 tools/convert_iu_xray.py annotation.json iu_xray.jsonl [--val train|test|drop]
"""
import argparse
import json
import sys


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("annotation", help="annotation.json path")
    parser.add_argument("output", help="output jsonl path")
    parser.add_argument("--val", choices=["train", "test", "drop"], default="train",
                        help="where validation studies go (default: train)")
    args = parser.parse_args()

    with open(args.annotation, encoding="utf-8") as f:
        doc = json.load(f)

    split_of = {"train": "train", "test": "test"}
    if args.val != "drop":
        split_of["val"] = args.val

    seen = set()
    written = 0
    with open(args.output, "w", encoding="utf-8") as out:
        for section, split in split_of.items():
            for record in doc.get(section, []):
                study_id = str(record.get("id") or record.get("study_id") or "")
                text = record.get("report") or record.get("text") or ""
                if not study_id:
                    print(f"skipping record without id in {section}", file=sys.stderr)
                    continue
                if study_id in seen:
                    print(f"skipping duplicate id {study_id}", file=sys.stderr)
                    continue
                seen.add(study_id)
                out.write(json.dumps({"study_id": study_id, "split": split,
                                      "text": text}) + "\n")
                written += 1
    print(f"wrote {written} records to {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
