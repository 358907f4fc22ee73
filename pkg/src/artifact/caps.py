"""Enumeration limits.  Exceeding one raises CapExceeded, never truncates."""

import contextlib

from .errors import CapExceeded

DEFAULTS = {
    "ring": 2 ** 20,
    "aut": 2 ** 16,
    "group": 2 ** 22,
}

_current = dict(DEFAULTS)


def get(name):
    return _current[name]


def check(name, value, what=""):
    if value > _current[name]:
        raise CapExceeded(
            f"{what or name} size {value} exceeds cap {_current[name]}",
            cap=name, limit=_current[name], value=value)


def set_caps(**kw):
    for k, v in kw.items():
        if k not in DEFAULTS:
            raise KeyError(k)
        _current[k] = int(v)


@contextlib.contextmanager
def override(**kw):
    saved = dict(_current)
    try:
        set_caps(**kw)
        yield
    finally:
        _current.clear()
        _current.update(saved)
