"""Shared record of acceptance verdicts, printed in the pytest summary."""

LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str = "") -> str:
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}" + (f" ({detail})" if detail else "")
    LINES.append(line)
    print(line)
    return line
