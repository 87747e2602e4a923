"""Golden values the pipeline is checked against.

Keys are (table id, row).  Translation parts use the aliases understood by
``parse_alias``: 0, t, -t, 1/3, 2/3, w/3, ...
"""

from __future__ import annotations

from types import MappingProxyType

from .eisenstein import TorsionPoint, _ALIASES, parse_point

_FROM_ALIAS = {v: k for k, v in _ALIASES.items()}


def parse_alias(text: str) -> TorsionPoint:
    text = text.strip()
    if text in _FROM_ALIAS:
        return _FROM_ALIAS[text]
    return parse_point(text)


def _freeze(d: dict) -> MappingProxyType:
    return MappingProxyType(dict(d))


SCREEN_PASSING = ("Z3xZ3", "Heis3")

KERNEL_COUNTS = _freeze({
    "admissible": 129,
    "orbits": 13,
    "heis_stable": 9,
})
HEIS_FREE_LATTICES = ("L1", "L2")

#: z3z3 table: kernel label -> (free actions, special classes)
Z32_TABLE = _freeze({
    "K1": (16, 16),
    "K2": (72, 8),
    "K3": (108, 12),
    "K4": (72, 8),
    "K5": (108, 12),
    "K6": (162, 18),
    "K7": (108, 4),
    "K8": (108, 4),
    "K9": (324, 4),
    "K10": (162, 2),
    "K11": (162, 2),
    "Kexc": (0, 0),
    "K12": (486, 6),
})

HEIS_FREE_NORMALIZED = _freeze({"L1": 108, "L2": 324})
HEIS_SPECIAL_CLASSES = _freeze({"L1": 4, "L2": 4})

CLASS_COUNTS = _freeze({
    ("z3z3", "bihol"): 12,
    ("z3z3", "diffeo"): 8,
    ("heis3", "bihol"): 4,
    ("heis3", "diffeo"): 4,
})
DIFFEO_MERGES = (("K2", "K4"), ("K3", "K5"), ("K7", "K8"), ("K10", "K11"))

#: (K_i, K_j) -> (det +1 count, det -1 count); every other pair i < j is empty
TRANSPORTERS = _freeze({
    ("K2", "K4"): (2592, 2592),
    ("K3", "K5"): (1944, 1944),
    ("K7", "K8"): (1944, 1944),
    ("K10", "K11"): (648, 648),
})

GROUP_ORDERS = _freeze({
    "aut_heis3": 432,
    "stab_chi1": 54,
    "stab_chi1_chi3": 27,
    "stab_chi1_real": 108,
    "n_aut0_z32": 3888,
    "n_aff0_z32": 62208,
    "d_group_heis": 648,
    "d_group_linear": 162,
    "n_r_heis": 3888,
    "n_c_heis": 972,
})

HODGE = _freeze({
    "heis3": {"h11": 2, "h21": 1, "h22": 2, "h10": 0, "h20": 0, "h30": 1, "h40": 0},
    "z3z3": {"h11": 4, "h21": 3, "h22": 6, "h10": 0, "h20": 0, "h30": 1, "h40": 0},
})

#: representatives of the biholomorphism classes, z3z3: kernel, tau(h), tau(k)
Z32_REPRESENTATIVES = _freeze({
    "K1": ("0,t,t,t", "t,0,0,0"),
    "K2": ("0,t,t,t", "t,0,0,0"),
    "K3": ("0,1/3,1/3,1/3", "t,0,0,0"),
    "K4": ("0,t,t,1/3", "2/3,0,0,0"),
    "K5": ("0,t,1/3,1/3", "2/3,0,0,0"),
    "K6": ("0,1/3,1/3,1/3", "2/3,0,0,0"),
    "K7": ("0,1/3,1/3,1/3", "t,0,0,0"),
    "K8": ("0,t,1/3,2/3", "2/3,0,0,0"),
    "K9": ("0,1/3,1/3,1/3", "2/3,0,0,0"),
    "K10": ("0,1/3,1/3,2/3", "2/3,0,0,0"),
    "K11": ("0,1/3,1/3,2/3", "2/3,0,0,0"),
    "K12": ("0,1/3,1/3,2/3", "1/3,0,0,0"),
})

#: Heis(3): tau(g), tau(h); tau(k) = ((1 - w) a1, 0, 0, 0) is forced
HEIS_REPRESENTATIVES = _freeze({
    "tau1": ("1/3,0,0,0", "0,1/3,1/3,1/3"),
    "tau2": ("1/3,0,0,-t", "0,1/3,1/3,1/3"),
})


def parse_vector4(text: str) -> tuple[TorsionPoint, ...]:
    parts = text.split(",")
    if len(parts) != 4:
        raise ValueError(f"expected four coordinates in {text!r}")
    return tuple(parse_alias(p) for p in parts)
