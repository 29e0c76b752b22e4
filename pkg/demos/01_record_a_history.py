"""Record a context history by hand, the way the 2D recorder does it.

Walks a couple of imagined days in the studio apartment: each time step
sends a partial assignment, unspecified factors fall back to defaults, and
identical consecutive snapshots collapse into one scene.
"""

import tempfile
from pathlib import Path

import capforge as cf
from capforge.presets import studio_environment

env = studio_environment()
print(f"environment '{env.name}' with {len(env.factors)} factors")
for factor in env.factors:
    print(f"  {factor.id:<12} {factor.kind.value:<12} {', '.join(factor.instances)}"
          f"  (default: {factor.default_instance})")

# ---- day one: a lazy Sunday ------------------------------------------------

history = cf.ContextHistory(env=env)
history = cf.new_day(history)

sunday = [
    {"time": "morning", "location": "kitchen", "activity": "cooking", "music": "on"},
    {"time": "noon", "location": "sofa", "activity": "eating", "tv": "on", "music": "off"},
    {"time": "afternoon", "location": "sofa", "activity": "reading", "tv": "off", "music": "on"},
    {"time": "afternoon", "location": "sofa", "activity": "reading", "tv": "off", "music": "on"},  # duplicate snapshot
    {"time": "evening", "location": "sofa", "activity": "eating", "tv": "on", "music": "off"},
    {"time": "night", "location": "bed"},
]
for snapshot in sunday:
    history = cf.append_scene(history, snapshot)

print(f"\nday 0 recorded: {history.scene_count} scenes "
      f"(one snapshot was an exact repeat and was dropped)")

# ---- day two: a work day ------------------------------------------------------

history = cf.new_day(history)
monday = [
    {"time": "morning", "location": "desk", "activity": "phone", "is-working": "working"},
    {"time": "noon", "location": "kitchen", "activity": "cooking"},
    {"time": "evening", "location": "sofa", "activity": "eating", "tv": "on", "music": "off"},
]
for snapshot in monday:
    history = cf.append_scene(history, snapshot)

print(f"day 1 recorded: total {history.scene_count} scenes")

# ---- persistence is one JSON line per scene -----------------------------------

path = Path(tempfile.mkdtemp()) / "history.jsonl"
cf.save_history(history, path)
print(f"\nsaved to {path}:")
for line in path.read_text().splitlines()[:3]:
    print(" ", line)
print("  ...")

reloaded = cf.load_history(path, env)
assert reloaded.scenes == history.scenes
print("reload round-trip ok")

verdict = cf.check_minimum_size(history)
print(f"\nanalytics floor: {verdict.actual}/{verdict.required} scenes "
      f"({'enough' if verdict.ok else 'keep recording'})")
