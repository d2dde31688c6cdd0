"""One PASS/FAIL line per acceptance criterion, echoed in the terminal summary."""

LINES: list[str] = []


def report(criterion: int, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line)
    return ok
