from __future__ import annotations

from fractions import Fraction as F

import pytest

from torusmirror.errors import InputError
from torusmirror.lattice import validate
from torusmirror.specfile import BUILTIN, load_spec, parse_complex, parse_spec


@pytest.mark.parametrize("text, expected", [
    ("i", (F(0), F(1))),
    ("1.3i", (F(0), F(13, 10))),
    ("2-i", (F(2), F(-1))),
    ("-1/2+3/4i", (F(-1, 2), F(3, 4))),
    ("0.3+1e-1i", (F(3, 10), F(1, 10))),
    ("5", (F(5), F(0))),
])
def test_parse_complex(text, expected):
    assert parse_complex(text) == expected


def test_builtin_specs_validate(builtin_spec):
    assert validate(builtin_spec).passed


def test_round_trip(builtin_spec):
    again = parse_spec(builtin_spec.to_text())
    assert again == builtin_spec
    assert again.digest() == builtin_spec.digest()


def test_tau_and_matrices():
    spec = parse_spec("N = 2 0; 0 2\ntau = i 0.1i; 0.1i 1.3i\ninvolution = yes\n")
    assert spec.M[0][1] == F(1, 10)
    assert spec.B == ((0, 0), (0, 0))
    assert spec.involution


@pytest.mark.parametrize("text", [
    "N = 3\nM = 1\ncolour = red\n",
    "N = 3\nM = 1\nM = 2\n",
    "N = 3\ntau = i\nM = 1\n",
    "M = 1\n",
    "N = 1.5\nM = 1\n",
    "N = 3\nM = 1\ninvolution = maybe\n",
    "N = 3\nM = 1\nn = 2\n",
    "N = 3\nthis line has no equals\n",
])
def test_rejects_bad_files(text):
    with pytest.raises(InputError):
        parse_spec(text)


def test_load_from_path(tmp_path):
    path = tmp_path / "t.spec"
    path.write_text("# comment\nname = t\nN = 3\nM = 1\nshift = 3/10\n")
    spec = load_spec(path)
    assert spec.shift == (F(3, 10),)
    assert spec.name == "t"


def test_missing_file():
    with pytest.raises(InputError):
        load_spec("/nonexistent/x.spec")


def test_builtin_names():
    assert set(BUILTIN) == {"hesse", "sklyanin", "quasihomogeneous", "kummer-degenerate",
                            "kummer-generic"}
