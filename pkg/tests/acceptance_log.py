"""Collects one summary line per acceptance criterion."""
import time
from contextlib import contextmanager

LINES: list[str] = []


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time the block; the block appends (ok, detail) pairs to the yielded list."""
    checks: list[tuple[bool, str]] = []
    start = time.perf_counter()
    try:
        yield checks
    except Exception as exc:
        checks.append((False, f"raised {type(exc).__name__}: {exc}"))
        raise
    finally:
        elapsed = time.perf_counter() - start
        if elapsed > limit_s:
            checks.append((False, f"took {elapsed:.1f}s > {limit_s:g}s"))
        ok = all(c for c, _ in checks)
        failed = [d for c, d in checks if not c]
        detail = "; ".join(failed) if failed else "; ".join(d for _, d in checks)
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} [{elapsed:6.1f}s] {title}: {detail}"
        LINES.append(line)
        print(line)
