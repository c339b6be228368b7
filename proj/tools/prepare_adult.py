#!/usr/bin/env python3
# Copyright 2026 The mdfair Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Merges the UCI Adult train and test files into one headed CSV.

Usage: prepare_adult.py ADULT_DATA ADULT_TEST OUTPUT_CSV

Fields are whitespace-trimmed, the "|1x3 Cross validator" line of the test
file is skipped and the trailing "." of test labels is removed. Missing
values stay as "?".
"""

import argparse
import csv

COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]


def read_rows(path):
  with open(path, newline="") as f:
    for raw in csv.reader(f):
      if not raw or raw[0].startswith("|"):
        continue
      row = [field.strip() for field in raw]
      if len(row) != len(COLUMNS):
        raise ValueError(f"{path}: unexpected row {raw!r}")
      row[-1] = row[-1].rstrip(".")
      yield row


def main():
  parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  parser.add_argument("adult_data")
  parser.add_argument("adult_test")
  parser.add_argument("output_csv")
  args = parser.parse_args()
  count = 0
  with open(args.output_csv, "w", newline="") as out:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for path in (args.adult_data, args.adult_test):
      for row in read_rows(path):
        writer.writerow(row)
        count += 1
  print(f"wrote {count} rows to {args.output_csv}")


if __name__ == "__main__":
  main()
