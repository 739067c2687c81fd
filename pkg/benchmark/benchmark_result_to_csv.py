# Copyright (C) 2026 The evo_transformers Authors.
# All rights reserved.
# Licensed under the BSD 3-Clause License (the "License"); you may
# not use this file except in compliance with the License. You may
# obtain a copy of the License at
# https://opensource.org/licenses/BSD-3-Clause
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" basis,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.
# See the AUTHORS file for names of contributors.

import json
import csv
import sys
import collections


def main():
    """Pivots benchmark.py JSON lines into one CSV row per task and one
    QPS column per program/runtime pair."""
    results = collections.OrderedDict()

    for line in sys.stdin:
        line = line.strip()
        if not line.startswith("{"):
            continue
        line = json.loads(line)
        task = f'{line["thread_num"]},{line["batch_size"]},{line["seq_len"]}'
        column = f'{line["program"]}/{line["runtime"]}'
        if task not in results:
            results[task] = collections.OrderedDict()
        results[task][column] = line["QPS"]

    columns = []
    for qps_dic in results.values():
        columns += [c for c in qps_dic if c not in columns]

    writer = csv.writer(sys.stdout)
    writer.writerow(["task"] + columns)
    for task, qps_dic in results.items():
        writer.writerow([task] +
                        [str(qps_dic.get(c, "")) for c in columns])


if __name__ == '__main__':
    main()
