"""Built-in Coxeter systems used by the verification suite and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from .coxeter import CoxeterMatrix, CoxeterSystem


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    description: str
    document: dict  # {"generators": [...], "m": [[...]]}, 0 for infinity

    @property
    def matrix(self):
        return CoxeterMatrix.from_json(self.document)

    def system(self, **kw):
        return CoxeterSystem(self.matrix, **kw)

    @property
    def finite(self):
        return self.system().is_finite()


def _doc(gens, m):
    return {"generators": list(gens), "m": m}


_ENTRIES = (
    CorpusEntry("Z2", "cyclic group of order 2", _doc("s", [[1]])),
    CorpusEntry("S3", "dihedral group of order 6 (type A2)", _doc("st", [[1, 3], [3, 1]])),
    CorpusEntry("I2_4", "dihedral group of order 8 (type B2)", _doc("st", [[1, 4], [4, 1]])),
    CorpusEntry("Dinf", "infinite dihedral group", _doc("st", [[1, 0], [0, 1]])),
    CorpusEntry(
        "A3",
        "symmetric group S4 (type A3)",
        _doc("stu", [[1, 3, 2], [3, 1, 3], [2, 3, 1]]),
    ),
    CorpusEntry("Z2xZ2", "right-angled (Z/2)^2", _doc("st", [[1, 2], [2, 1]])),
    CorpusEntry(
        "tripod",
        "free product of three copies of Z/2",
        _doc("stu", [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
    ),
    CorpusEntry(
        "RApath",
        "right-angled group of the path s - t - u (s and u commute)",
        _doc("stu", [[1, 0, 2], [0, 1, 0], [2, 0, 1]]),
    ),
)


def corpus():
    return list(_ENTRIES)


def get(name):
    for entry in _ENTRIES:
        if entry.name.lower() == name.lower():
            return entry
    raise KeyError(f"no corpus entry named {name!r}; known: {[e.name for e in _ENTRIES]}")


def finite_entries():
    return [e for e in _ENTRIES if e.finite]


def infinite_entries():
    return [e for e in _ENTRIES if not e.finite]
