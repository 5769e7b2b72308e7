"""Regenerate generators.json: python3 tests/golden/make_generators.py"""

import json
import pathlib

from mbfib.generators import ALL_FAMILIES, build, instances

OUT = pathlib.Path(__file__).with_name("generators.json")


def snapshot() -> dict:
    out = {}
    for fam in ALL_FAMILIES:
        for k, spec in enumerate(instances(fam, 4)):
            key = spec.name() if spec.probe is None else f"{spec.family}(probe={k})"
            f = build(spec)
            out[key] = {"source": f.source.to_dict(), "target": f.target.to_dict(),
                        "assign": f.map.to_dict()}
    return out


if __name__ == "__main__":
    OUT.write_text(json.dumps(snapshot(), sort_keys=True, indent=0) + "\n")
