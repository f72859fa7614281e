"""Regenerate docs/check_ids.md: every suite check id with the equation tag it verifies."""

from pathlib import Path

from fedosphere.suites import SUITES, broken_probe

HEADER = """# Check index

Every check id emitted by `fedosphere verify`, grouped by suite, with the tag
of the equation or display it verifies.  Regenerate with
`python scripts/gen_check_index.py`.
"""


def render() -> str:
    lines = [HEADER]
    for name, build in SUITES.items():
        lines += [f"## {name}", "", "| id | tag |", "|---|---|"]
        for spec in sorted(build(), key=lambda s: s.id):
            lines.append(f"| `{spec.id}` | {spec.tag} |")
        lines.append("")
    probe = broken_probe()
    lines += ["## probes (`--inject-failure`)", "", "| id | tag |", "|---|---|", f"| `{probe.id}` | {probe.tag} |", ""]
    return "\n".join(lines)


if __name__ == "__main__":
    out = Path(__file__).resolve().parent.parent / "docs" / "check_ids.md"
    out.write_text(render())
    print(f"wrote {out}")
