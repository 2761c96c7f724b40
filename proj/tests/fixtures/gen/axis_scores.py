# Copyright 2026 The hteb Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes published_axis_scores.json from the appendix axis tables."""

import json
import re
from pathlib import Path

HERE = Path(__file__).resolve().parent

ENGLISH = """
All-MiniLM-L12-v2 & 66.36 & 62.64 (-3.72) & 61.86 (-4.50) & 37.14 (-29.22) & 53.88 (-12.48)
All-MPNet-Base-v2 & 67.09 & 62.84 (-4.25) & 62.57 (-4.52) & 36.34 (-30.75) & 53.92 (-13.17)
MXBAI-Emb-Large-v1 & 70.75 & 66.34 (-4.41) & 65.32 (-5.43) & 40.72 (-30.03) & 57.46 (-13.29)
Stella-EN-400M-v5 & 71.04 & 66.67 (-4.37) & 65.23 (-5.81) & 45.46 (-25.58) & 59.12 (-11.92)
Jasper-600M & 70.78 & 67.10 (-3.67) & 65.14 (-5.63) & 56.69 (-14.08) & 62.98 (-7.80)
Jina-Emb-v5-Small & 71.50 & 67.64 (-3.85) & 65.75 (-5.75) & 66.12 (-5.38) & 66.50 (-5.00)
F2LLM-v2-4B & 73.00 & 68.42 (-4.58) & 66.93 (-6.07) & 67.76 (-5.24) & 67.70 (-5.30)
E5-Mistral-7B-it & 67.28 & 63.32 (-3.96) & 62.71 (-4.57) & 56.47 (-10.82) & 60.83 (-6.45)
Llama-Nemotron-8B & 63.17 & 59.91 (-3.26) & 62.49 (-0.68) & 54.16 (-9.01) & 58.85 (-4.32)
Qwen3-Emb-8B & 72.77 & 68.12 (-4.66) & 66.62 (-6.15) & 67.09 (-5.69) & 67.28 (-5.50)
NV-Embed-v2 & 73.34 & 69.26 (-4.08) & 66.99 (-6.34) & 61.84 (-11.49) & 66.03 (-7.31)
Average & 69.73 & 65.66 (-4.07) & 64.69 (-5.04) & 53.62 (-16.12) & 61.32 (-8.41)
"""

MULTILINGUAL = """
Harrier-270M & 58.79 & 55.59 (-3.20) & 54.64 (-4.15) & 55.33 (-3.46) & 55.19 (-3.60)
Paraphr.-ML-MPNet & 55.47 & 54.35 (-1.12) & 53.40 (-2.07) & 58.71 (+3.24) & 55.49 (+0.02)
GTE-ML-Base & 62.40 & 60.11 (-2.29) & 59.46 (-2.95) & 61.35 (-1.05) & 60.31 (-2.10)
ML-E5-Large-it & 61.69 & 58.63 (-3.06) & 57.88 (-3.81) & 57.46 (-4.23) & 57.99 (-3.70)
BGE-M3 & 62.99 & 60.32 (-2.67) & 58.95 (-4.04) & 60.63 (-2.37) & 59.97 (-3.02)
Jina-Emb-v5-Small & 63.89 & 61.54 (-2.35) & 60.86 (-3.02) & 64.69 (+0.80) & 62.36 (-1.52)
F2LLM-v2-4B & 67.89 & 65.09 (-2.80) & 63.74 (-4.15) & 67.76 (-0.13) & 65.53 (-2.36)
Llama-Nemotron-8B & 56.38 & 54.86 (-1.52) & 57.82 (+1.44) & 56.59 (+0.21) & 56.42 (+0.05)
Qwen3-Emb-8B & 64.28 & 61.79 (-2.49) & 61.02 (-3.26) & 63.16 (-1.12) & 61.99 (-2.29)
Average & 61.53 & 59.14 (-2.39) & 58.64 (-2.89) & 60.63 (-0.90) & 59.47 (-2.06)
"""


def parse(block):
    rows = []
    for line in block.strip().splitlines():
        cells = [c.strip() for c in line.split("&")]
        nums = [re.match(r"([\d.]+)(?: \(([+-][\d.]+)\))?", c).groups() for c in cells[1:]]
        rows.append({
            "model": cells[0],
            "original": float(nums[0][0]),
            "axes": {
                "LexicalStylistic": float(nums[1][0]),
                "Length": float(nums[2][0]),
                "Language": float(nums[3][0]),
            },
            "axis_deltas": {
                "LexicalStylistic": float(nums[1][1]),
                "Length": float(nums[2][1]),
                "Language": float(nums[3][1]),
            },
            "total": float(nums[4][0]),
            "delta": float(nums[4][1]),
        })
    models = [r for r in rows if r["model"] != "Average"]
    average = next(r for r in rows if r["model"] == "Average")
    return {"models": models, "average": average}


def main():
    out = {"english": parse(ENGLISH), "multilingual": parse(MULTILINGUAL)}
    (HERE.parent / "published_axis_scores.json").write_text(json.dumps(out, indent=2) + "\n")


if __name__ == "__main__":
    main()
