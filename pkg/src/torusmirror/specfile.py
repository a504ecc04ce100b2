"""Plain-text torus spec files.

Grammar (one ``key = value`` per line, ``#`` starts a comment)::

    name = hesse                 # optional label
    n = 1                        # optional; inferred from N
    N = 3                        # integer matrix
    M = 1                        # real matrix
    B = 0                        # real matrix
    tau = i                      # complex matrix; alternative to M and B (B = Re, M = Im)
    shift = 3/10                 # rational vector, default 0
    involution = false           # true/false

Matrices are row-major, rows separated by ``;`` and entries by ``,`` or
whitespace.  Real entries may be integers, decimals or ``p/q``; they are kept
as exact fractions.  Complex entries look like ``1.3i``, ``-1/2+0.8660254i``
or ``2-i``.  Unknown or repeated keys are rejected.
"""
from __future__ import annotations

import re
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import InputError
from .lattice import TorusSpec

KEYS = {"name", "n", "N", "M", "B", "tau", "shift", "involution"}
BUILTIN = ("hesse", "sklyanin", "quasihomogeneous", "kummer-degenerate", "kummer-generic")

_REAL = r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"


def parse_real(tok: str) -> Fraction:
    tok = tok.strip()
    if not re.fullmatch(_REAL, tok):
        raise InputError(f"not a real number: {tok!r}")
    if "/" in tok:
        num, den = tok.split("/")
        return Fraction(num) / Fraction(den)
    return Fraction(tok)


def parse_complex(tok: str) -> tuple[Fraction, Fraction]:
    """Parse ``a+bi`` style text into exact (real, imaginary) parts."""
    s = tok.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise InputError("empty complex number")
    if s.endswith("i"):
        body = s[:-1]
        # split at the last sign that is not part of an exponent or the leading sign
        cut = None
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                cut = pos
                break
        re_part, im_part = (body[:cut], body[cut:]) if cut is not None else ("", body)
        if im_part in ("", "+"):
            im = Fraction(1)
        elif im_part == "-":
            im = Fraction(-1)
        else:
            im = parse_real(im_part)
        real = parse_real(re_part) if re_part else Fraction(0)
        return real, im
    return parse_real(s), Fraction(0)


def parse_complex_value(tok: str) -> complex:
    re_, im = parse_complex(tok)
    return complex(float(re_), float(im))


def _rows(value: str) -> list[list[str]]:
    rows = [r.strip() for r in value.split(";")]
    if any(not r for r in rows):
        raise InputError(f"empty matrix row in {value!r}")
    return [[t for t in re.split(r"[,\s]+", r) if t] for r in rows]


def _parse_bool(value: str) -> bool:
    v = value.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise InputError(f"not a boolean: {value!r}")


def parse_spec(text: str) -> TorusSpec:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise InputError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise InputError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    if "N" not in entries:
        raise InputError("spec file must define N")
    if "tau" in entries and ("M" in entries or "B" in entries):
        raise InputError("give either tau or M/B, not both")
    N = [[int(parse_real(t)) if parse_real(t).denominator == 1 else _bad_int(t) for t in r]
         for r in _rows(entries["N"])]
    if "tau" in entries:
        cells = [[parse_complex(t) for t in r] for r in _rows(entries["tau"])]
        M = [[c[1] for c in r] for r in cells]
        B = [[c[0] for c in r] for r in cells]
    else:
        if "M" not in entries:
            raise InputError("spec file must define M (or tau)")
        M = [[parse_real(t) for t in r] for r in _rows(entries["M"])]
        B = ([[parse_real(t) for t in r] for r in _rows(entries["B"])] if "B" in entries
             else [[Fraction(0)] * len(M) for _ in M])
    shift = None
    if "shift" in entries:
        shift = [parse_real(t) for t in re.split(r"[,\s;]+", entries["shift"].strip()) if t]
    spec = TorusSpec.build(M, B, N, shift=shift,
                           involution=_parse_bool(entries.get("involution", "false")),
                           name=entries.get("name", ""))
    if "n" in entries and int(parse_real(entries["n"])) != spec.n:
        raise InputError(f"n = {entries['n']} disagrees with matrix size {spec.n}")
    return spec


def _bad_int(tok: str):
    raise InputError(f"N entries must be integers, got {tok!r}")


def _fmt(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(x)
    return repr(float(x))


def format_spec(spec: TorusSpec) -> str:
    def mat(m):
        return "; ".join(" ".join(_fmt(x) for x in r) for r in m)
    lines = []
    if spec.name:
        lines.append(f"name = {spec.name}")
    lines += [f"n = {spec.n}",
              f"N = {mat(spec.N)}",
              f"M = {mat(spec.M)}",
              f"B = {mat(spec.B)}",
              f"shift = {' '.join(_fmt(s) for s in spec.shift)}",
              f"involution = {'true' if spec.involution else 'false'}"]
    return "\n".join(lines) + "\n"


def load_spec(path_or_name: str | Path) -> TorusSpec:
    """Load a spec file, or one of the built-in specs by name."""
    name = str(path_or_name)
    if name in BUILTIN:
        text = resources.files("torusmirror.specs").joinpath(f"{name}.spec").read_text()
        return parse_spec(text)
    path = Path(name)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read spec file {path}: {exc}") from None
    return parse_spec(text)
