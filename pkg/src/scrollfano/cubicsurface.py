"""The 27 lines of a smooth cubic surface, as classes in its Picard lattice.

Classes are written in the blow-down basis E0, E1..E6 with E0^2 = 1 and
Ei^2 = -1. A twisted cubic class gamma and its residual -2K - gamma split
the lines into bisecants of gamma, bisecants of the residual, and the rest.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True, order=True)
class PicardClass:
    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) != 7:
            raise ValueError("Picard classes have seven coefficients")
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    def dot(self, other: "PicardClass") -> int:
        a, b = self.coefficients, other.coefficients
        return a[0] * b[0] - sum(a[i] * b[i] for i in range(1, 7))

    def square(self) -> int:
        return self.dot(self)

    def __add__(self, other):
        return PicardClass(tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        return PicardClass(tuple(x - y for x, y in zip(self.coefficients, other.coefficients)))

    def __neg__(self):
        return PicardClass(tuple(-x for x in self.coefficients))

    def __rmul__(self, k: int):
        return PicardClass(tuple(k * x for x in self.coefficients))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coefficients):
            if c in (1, -1):
                parts.append(f"{'+' if c > 0 else '-'}E{i}")
            elif c:
                parts.append(f"{c:+d}E{i}")
        return "".join(parts).lstrip("+") or "0"


def E(i: int) -> PicardClass:
    return PicardClass(tuple(int(j == i) for j in range(7)))


K = PicardClass((-3, 1, 1, 1, 1, 1, 1))


@dataclass(frozen=True)
class LineClass:
    name: str
    cls: PicardClass


@lru_cache(maxsize=1)
def line_classes() -> tuple:
    """All 27 lines: E_i, then E0 - E_i - E_j, then 2E0 - sum_{j != i} E_j."""
    out = [LineClass(f"E{i}", E(i)) for i in range(1, 7)]
    for i, j in itertools.combinations(range(1, 7), 2):
        out.append(LineClass(f"F{i}{j}", E(0) - E(i) - E(j)))
    for i in range(1, 7):
        c = 2 * E(0)
        for j in range(1, 7):
            if j != i:
                c = c - E(j)
        out.append(LineClass(f"G{i}", c))
    return tuple(out)


def dual_class(gamma: PicardClass) -> PicardClass:
    """The residual twisted cubic -2K - gamma."""
    return (-2) * K - gamma


TWISTED_CUBICS = {
    "syz": (E(0), PicardClass((3, -2, -1, -1, -1, -1, 0))),
    "nonsyz": (E(0), E(0)),
}


def twisted_cubic_pair(scenario: str) -> tuple:
    """(gamma1, gamma1_dual, gamma2, gamma2_dual) for a scenario name."""
    name = getattr(scenario, "name", scenario)
    if name not in TWISTED_CUBICS:
        raise ValueError(f"no twisted cubic data for {name!r}")
    g1, g2 = TWISTED_CUBICS[name]
    return g1, dual_class(g1), g2, dual_class(g2)


@dataclass(frozen=True)
class Components:
    P: tuple
    S: tuple
    P_dual: tuple

    def sizes(self) -> tuple:
        return len(self.P), len(self.S), len(self.P_dual)


def component_classes(gamma: PicardClass, gamma_dual: PicardClass | None = None) -> Components:
    """Split the lines into bisecants of gamma, of its residual, and the rest."""
    gamma_dual = gamma_dual or dual_class(gamma)
    P, S, Pd = [], [], []
    for line in line_classes():
        a, b = line.cls.dot(gamma), line.cls.dot(gamma_dual)
        if a not in (0, 1, 2) or a + b != 2:
            raise ValueError(f"{gamma} does not look like a twisted cubic class (line {line.name})")
        if a == 2:
            P.append(line.name)
        elif b == 2:
            Pd.append(line.name)
        else:
            S.append(line.name)
    return Components(tuple(P), tuple(S), tuple(Pd))


def intersection_table(scenario) -> list[list[int]]:
    """Numbers of common lines between the components (P, S, P_dual) of the two pairs."""
    g1, g1d, g2, g2d = twisted_cubic_pair(scenario)
    A, B = component_classes(g1, g1d), component_classes(g2, g2d)
    rows = (A.P, A.S, A.P_dual)
    cols = (B.P, B.S, B.P_dual)
    return [[len(set(r) & set(c)) for c in cols] for r in rows]
