"""Families of diagonal conics with monomial coefficients.

A monomial is stored as a bitmask: bit 0 is the sign ("-") and bit k is
the variable t_k.  A conic is a triple of such masks.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .errors import DegenerateFibreError, FamilyError, FamilySyntaxError

MODES = ("affine", "projective", "squarefree")
SIDES = ("redei",)


def degree(mono: int) -> int:
    return (mono >> 1).bit_count()


def mono_value(mono: int, t) -> int:
    x = -1 if mono & 1 else 1
    k = 1
    rest = mono >> 1
    while rest:
        if rest & 1:
            x *= t[k - 1]
        rest >>= 1
        k += 1
    return x


def format_mono(mono: int) -> str:
    vars_ = [f"t{k}" for k in range(1, mono.bit_length()) if mono >> k & 1]
    body = "*".join(vars_) if vars_ else "1"
    return ("-" if mono & 1 else "") + body


@dataclass(frozen=True)
class EvaluatedFibre:
    t: tuple[int, ...]
    coefficients: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class MonomialConicFamily:
    n: int
    conics: tuple[tuple[int, int, int], ...]
    mode: str = "affine"
    side: str | None = None
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise FamilyError("need at least one variable")
        if not self.conics:
            raise FamilyError("need at least one conic")
        if self.mode not in MODES:
            raise FamilyError(f"unknown mode {self.mode!r}")
        if self.side is not None and self.side not in SIDES:
            raise FamilyError(f"unknown side condition {self.side!r}")
        top = 1 << (self.n + 1)
        for i, conic in enumerate(self.conics, 1):
            if len(conic) != 3:
                raise FamilyError(f"conic {i} needs three monomials")
            seen = 0
            for mono in conic:
                if not 0 <= mono < top:
                    raise FamilyError(f"conic {i} uses a variable beyond t{self.n}")
                if seen & mono & ~1:
                    raise FamilyError(f"conic {i}: monomials share a variable")
                seen |= mono
            if self.mode == "projective" and len({degree(x) for x in conic}) != 1:
                raise FamilyError(f"conic {i}: projective mode needs equal degrees")

    @property
    def m(self) -> int:
        return len(self.conics)

    def evaluate(self, t) -> EvaluatedFibre:
        t = tuple(int(x) for x in t)
        if len(t) != self.n:
            raise FamilyError(f"expected {self.n} coordinates, got {len(t)}")
        if any(x == 0 for x in t):
            raise DegenerateFibreError(f"zero coordinate in {t}")
        coeffs = tuple(tuple(mono_value(x, t) for x in c) for c in self.conics)
        return EvaluatedFibre(t, coeffs)

    def serialize(self) -> str:
        lines = [f"vars = {self.n}"]
        for c in self.conics:
            lines.append("conic = " + " | ".join(format_mono(x) for x in c))
        lines.append(f"mode = {self.mode}")
        if self.side:
            lines.append(f"side = {self.side}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:16]


_KEY = re.compile(r"\s*([a-z]+)\s*=\s*(.*?)\s*$")
_VAR = re.compile(r"t(\d+)$")


def _parse_mono(text: str, n: int, line: int, col: int) -> int:
    s = text.strip()
    col += len(text) - len(text.lstrip())
    mask = 0
    if s.startswith("-"):
        mask = 1
        s = s[1:].strip()
    if s == "1":
        return mask
    if not s:
        raise FamilySyntaxError(line, col, "empty monomial")
    for factor in s.split("*"):
        hit = _VAR.match(factor.strip())
        if not hit:
            raise FamilySyntaxError(line, col, f"bad factor {factor.strip()!r}")
        k = int(hit.group(1))
        if not 1 <= k <= n:
            raise FamilySyntaxError(line, col, f"variable t{k} out of range 1..{n}")
        if mask >> k & 1:
            raise FamilySyntaxError(line, col, f"t{k} repeated: monomials must be squarefree")
        mask |= 1 << k
    return mask


def parse_family(text: str, name: str | None = None) -> MonomialConicFamily:
    n = None
    conics = []
    mode = "affine"
    side = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        hit = _KEY.match(body)
        if not hit:
            raise FamilySyntaxError(lineno, 1, "expected 'key = value'")
        key, value = hit.groups()
        vcol = body.index("=") + 2
        if n is None and key != "vars":
            raise FamilySyntaxError(lineno, 1, "first directive must be 'vars = n'")
        if key == "vars":
            if n is not None:
                raise FamilySyntaxError(lineno, 1, "'vars' given twice")
            if not value.isdigit() or int(value) < 1:
                raise FamilySyntaxError(lineno, vcol, "vars must be a positive integer")
            n = int(value)
        elif key == "conic":
            parts = value.split("|")
            if len(parts) != 3:
                raise FamilySyntaxError(lineno, vcol, "a conic needs exactly three monomials")
            monos = []
            col = vcol
            for part in parts:
                monos.append(_parse_mono(part, n, lineno, col))
                col += len(part) + 1
            conics.append(tuple(monos))
        elif key == "mode":
            if value not in MODES:
                raise FamilySyntaxError(lineno, vcol, f"unknown mode {value!r}")
            mode = value
        elif key == "side":
            if value not in SIDES:
                raise FamilySyntaxError(lineno, vcol, f"unknown side condition {value!r}")
            side = value
        else:
            raise FamilySyntaxError(lineno, 1, f"unknown key {key!r}")
    if n is None:
        raise FamilySyntaxError(1, 1, "missing 'vars = n'")
    if not conics:
        raise FamilySyntaxError(1, 1, "no conics")
    return MonomialConicFamily(n, tuple(conics), mode, side, name)


BUILTINS = {
    "planar": """\
vars = 3
conic = t1 | t2 | t3
mode = projective
""",
    "redei": """\
vars = 3
conic = -1 | t1 | t2
conic = -1 | t1 | t3
conic = -1 | t2 | t3
mode = squarefree
side = redei
""",
    "example31": """\
vars = 6
conic = t2*t3 | t1*t4 | -1
conic = t2*t5 | t1*t6 | -1
conic = t4*t5 | t3*t6 | -1
mode = affine
""",
}


def builtin(name: str) -> MonomialConicFamily:
    if name not in BUILTINS:
        raise FamilyError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")
    return parse_family(BUILTINS[name], name=name)


def load_family(ref: str) -> MonomialConicFamily:
    """Resolve ``builtin:NAME`` or a path to a family file."""
    if ref.startswith("builtin:"):
        return builtin(ref.split(":", 1)[1])
    with open(ref, encoding="utf-8") as fh:
        return parse_family(fh.read(), name=ref)
