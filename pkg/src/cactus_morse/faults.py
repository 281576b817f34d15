"""Deliberate corruptions used to check that the verification suites can fail."""
from __future__ import annotations

import contextlib

from cactus_morse import blowup, complexes, morse

FAULTS = ("height", "sign", "compatibility")


def _flipped_height(original):
    def height(g):
        h = list(original(g))
        for i in range(2, len(h), 2):
            h[i] = -h[i]
        return tuple(h)
    return height


@contextlib.contextmanager
def inject_fault(name: str | None):
    """Temporarily corrupt one primitive.

    ``height`` flips the sign of every c_i with i >= 1, ``sign`` makes every
    simplicial face coefficient +1, ``compatibility`` declares all
    partitions compatible.
    """
    if name is None:
        yield
        return
    if name not in FAULTS:
        raise ValueError(f"unknown fault {name!r}; choose from {', '.join(FAULTS)}")
    saved = []

    def patch(module, attr, value):
        saved.append((module, attr, getattr(module, attr)))
        setattr(module, attr, value)

    if name == "height":
        bad = _flipped_height(morse.height)
        patch(morse, "height", bad)
        patch(blowup, "height", bad)
    elif name == "sign":
        patch(complexes, "face_sign", lambda i: 1)
    else:
        patch(blowup, "compatible", lambda P, Q: True)
    try:
        yield
    finally:
        for module, attr, value in reversed(saved):
            setattr(module, attr, value)
