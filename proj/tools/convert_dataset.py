#!/usr/bin/env python3
"""Convert a wide survey export (one row per participant, one column per
question) into the long `user_id,element_id,answer` CSV that `normcast ingest`
reads.

Columns that are not preference questions (demographics, timestamps, ...) are
dropped with --exclude or by keeping only --include-prefix matches. Blank and
non-numeric answers are skipped.

    python3 tools/convert_dataset.py survey.csv -o data/reference.csv \
        --id-column ResponseId --include-prefix Q
"""

import argparse
import csv
import sys


def parse_args(argv):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("input", help="wide CSV export")
    p.add_argument("-o", "--output", default="-", help="long CSV output (default stdout)")
    p.add_argument("--id-column", help="participant id column; row numbers are used when omitted")
    p.add_argument("--include-prefix", action="append", default=[],
                   help="keep only question columns starting with this prefix (repeatable)")
    p.add_argument("--exclude", action="append", default=[], help="column to drop (repeatable)")
    p.add_argument("--skip-rows", type=int, default=0,
                   help="data rows to skip after the header (e.g. question text rows)")
    p.add_argument("--min", type=float, help="drop answers below this value")
    p.add_argument("--max", type=float, help="drop answers above this value")
    return p.parse_args(argv)


def question_columns(header, args):
    excluded = set(args.exclude)
    if args.id_column:
        excluded.add(args.id_column)
    cols = [c for c in header if c not in excluded]
    if args.include_prefix:
        cols = [c for c in cols if any(c.startswith(p) for p in args.include_prefix)]
    return cols


def number(text):
    try:
        v = float(text.strip())
    except ValueError:
        return None
    return v if v == v else None


def convert(reader, writer, args):
    header = next(reader, None)
    if header is None:
        raise SystemExit("input is empty")
    index = {name: i for i, name in enumerate(header)}
    if args.id_column and args.id_column not in index:
        raise SystemExit(f"id column {args.id_column!r} not in header")
    cols = question_columns(header, args)
    if not cols:
        raise SystemExit("no question columns selected")

    writer.writerow(["user_id", "element_id", "answer"])
    seen = set()
    rows = kept = dropped = 0
    for n, row in enumerate(reader):
        if n < args.skip_rows:
            continue
        rows += 1
        user = row[index[args.id_column]].strip() if args.id_column else f"p{rows:05d}"
        if not user:
            raise SystemExit(f"row {n + 2}: empty participant id")
        if user in seen:
            raise SystemExit(f"row {n + 2}: duplicate participant id {user!r}")
        seen.add(user)
        for c in cols:
            i = index[c]
            v = number(row[i]) if i < len(row) else None
            if v is None or (args.min is not None and v < args.min) or (args.max is not None and v > args.max):
                dropped += 1
                continue
            writer.writerow([user, c, f"{v:g}"])
            kept += 1
    print(f"{rows} participants, {len(cols)} questions, {kept} answers kept, {dropped} skipped", file=sys.stderr)


def main(argv=None):
    args = parse_args(argv)
    with open(args.input, newline="", encoding="utf-8-sig") as f:
        reader = csv.reader(f)
        if args.output == "-":
            convert(reader, csv.writer(sys.stdout, lineterminator="\n"), args)
        else:
            with open(args.output, "w", newline="", encoding="utf-8") as out:
                convert(reader, csv.writer(out, lineterminator="\n"), args)


if __name__ == "__main__":
    main()
