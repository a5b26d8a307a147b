"""Pedigree data model, validation and JSON ingestion.

The pedigree is the single source of truth for family structure and observed
history.  Values are immutable after construction and safe to share across
concurrent readers; "edits" (used e.g. when re-censoring an individual for a
risk query) produce new pedigrees.

JSON schema (UTF-8), strict about unknown keys::

    {"individuals": [{"id": str, "sex": "M"|"F"|"U",
                      "father": str|null, "mother": str|null,
                      "phenotype": {"kind": "affected"|"unaffected", "age": number}|null,
                      "genotypes": ["00"|"01"|"10"|"11", ...],   # optional, default all
                      "twin_group": str|null}, ...],
     "tests": [{"id": str, "result": "positive"|"negative",
                "sensitivity": number, "specificity": number}, ...]}   # optional
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .tables import GENOTYPES

__all__ = [
    "PhenotypeEvent",
    "GeneticTestResult",
    "Individual",
    "Pedigree",
    "PedigreeError",
    "PedigreeParseError",
    "PedigreeValidationError",
    "load_pedigree",
    "serialize_pedigree",
    "founders",
    "has_loop",
]

SEXES = ("M", "F", "U")
ALL_GENOTYPES = frozenset(GENOTYPES)


class PedigreeError(ValueError):
    """Base class for pedigree ingestion and validation failures."""


class PedigreeParseError(PedigreeError):
    """The input is not well-formed JSON or not the expected shape."""


class PedigreeValidationError(PedigreeError):
    """A structural rule is violated; carries the offending individual and rule."""

    def __init__(self, rule: str, individual: str | None, message: str):
        super().__init__(message)
        self.rule = rule
        self.individual = individual


def _fail(rule: str, individual: str | None, message: str):
    raise PedigreeValidationError(rule, individual, message)


@dataclass(frozen=True)
class PhenotypeEvent:
    kind: str  # "affected" (diagnosed at `age`) or "unaffected" (censored at `age`)
    age: float

    def __post_init__(self):
        if self.kind not in ("affected", "unaffected"):
            raise PedigreeParseError(f"phenotype kind must be affected/unaffected, got {self.kind!r}")
        object.__setattr__(self, "age", float(self.age))
        if not self.age > 0:
            raise PedigreeParseError(f"phenotype age must be positive, got {self.age}")


@dataclass(frozen=True)
class GeneticTestResult:
    individual_id: str
    observed: str  # "positive" or "negative"
    sensitivity: float
    specificity: float

    def __post_init__(self):
        if self.observed not in ("positive", "negative"):
            raise PedigreeParseError(f"test result must be positive/negative, got {self.observed!r}")
        for name in ("sensitivity", "specificity"):
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not 0.0 <= v <= 1.0:
                raise PedigreeParseError(f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class Individual:
    id: str
    sex: str = "U"
    father_id: str | None = None
    mother_id: str | None = None
    phenotype: PhenotypeEvent | None = None
    genotype_constraint: frozenset[str] = ALL_GENOTYPES
    twin_group: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "genotype_constraint", frozenset(self.genotype_constraint))
        if self.sex not in SEXES:
            raise PedigreeParseError(f"sex must be one of {SEXES}, got {self.sex!r}")
        bad = self.genotype_constraint - ALL_GENOTYPES
        if bad:
            raise PedigreeParseError(f"unknown genotypes {sorted(bad)} for {self.id!r}")

    @property
    def is_founder(self) -> bool:
        return self.father_id is None and self.mother_id is None


@dataclass(frozen=True)
class Pedigree:
    individuals: tuple[Individual, ...]
    tests: tuple[GeneticTestResult, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "individuals", tuple(self.individuals))
        object.__setattr__(self, "tests", tuple(self.tests))
        object.__setattr__(self, "_by_id", {ind.id: ind for ind in self.individuals})
        _validate(self)

    def __len__(self) -> int:
        return len(self.individuals)

    def __getitem__(self, individual_id: str) -> Individual:
        return self._by_id[individual_id]

    def __contains__(self, individual_id: str) -> bool:
        return individual_id in self._by_id

    def ids(self) -> tuple[str, ...]:
        return tuple(ind.id for ind in self.individuals)

    def founders(self) -> frozenset[str]:
        return frozenset(ind.id for ind in self.individuals if ind.is_founder)

    def tests_for(self, individual_id: str) -> tuple[GeneticTestResult, ...]:
        return tuple(t for t in self.tests if t.individual_id == individual_id)

    def with_phenotype(self, individual_id: str, phenotype: PhenotypeEvent | None) -> "Pedigree":
        """New pedigree with the given individual's phenotype replaced."""
        if individual_id not in self._by_id:
            _fail("unknown reference", individual_id, f"unknown individual {individual_id!r}")
        inds = tuple(
            replace(ind, phenotype=phenotype) if ind.id == individual_id else ind
            for ind in self.individuals
        )
        return Pedigree(inds, self.tests)

    def with_constraint(self, individual_id: str, allowed) -> "Pedigree":
        """New pedigree with the individual's genotype set narrowed to ``allowed``."""
        if individual_id not in self._by_id:
            _fail("unknown reference", individual_id, f"unknown individual {individual_id!r}")
        inds = tuple(
            replace(ind, genotype_constraint=frozenset(allowed)) if ind.id == individual_id else ind
            for ind in self.individuals
        )
        return Pedigree(inds, self.tests)


def _validate(p: Pedigree):
    by_id: dict[str, Individual] = {}
    for ind in p.individuals:
        if ind.id in by_id:
            _fail("duplicate id", ind.id, f"duplicate individual id {ind.id!r}")
        by_id[ind.id] = ind

    for ind in p.individuals:
        if (ind.father_id is None) != (ind.mother_id is None):
            _fail("single parent", ind.id,
                  f"individual {ind.id!r} lists one parent; list both or neither")
        for which, pid, allowed in (
            ("father", ind.father_id, ("M", "U")),
            ("mother", ind.mother_id, ("F", "U")),
        ):
            if pid is None:
                continue
            if pid not in by_id:
                _fail("unknown reference", ind.id,
                      f"individual {ind.id!r} references unknown {which} {pid!r}")
            if by_id[pid].sex not in allowed:
                _fail("parent sex", ind.id,
                      f"{which} {pid!r} of {ind.id!r} has sex {by_id[pid].sex!r}")
        if not ind.genotype_constraint:
            _fail("empty constraint", ind.id,
                  f"individual {ind.id!r} has an empty genotype set")

    # Parent links must be acyclic (nobody is their own ancestor).
    state: dict[str, int] = {}

    def visit(start: str):
        stack = [(start, iter(_parent_ids(by_id[start])))]
        state[start] = 1
        while stack:
            node, parents = stack[-1]
            advanced = False
            for pid in parents:
                if state.get(pid, 0) == 1:
                    _fail("cyclic ancestry", pid,
                          f"individual {pid!r} is its own ancestor")
                if state.get(pid, 0) == 0:
                    state[pid] = 1
                    stack.append((pid, iter(_parent_ids(by_id[pid]))))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()

    for ind in p.individuals:
        if state.get(ind.id, 0) == 0:
            visit(ind.id)

    groups: dict[str, list[Individual]] = {}
    for ind in p.individuals:
        if ind.twin_group is not None:
            groups.setdefault(ind.twin_group, []).append(ind)
    for label, members in groups.items():
        if len(members) < 2:
            _fail("twin group", members[0].id,
                  f"twin group {label!r} has fewer than 2 members")
        pairs = {(m.father_id, m.mother_id) for m in members}
        if len(pairs) != 1:
            _fail("twin group", members[0].id,
                  f"twin group {label!r} members have different parents")

    for t in p.tests:
        if t.individual_id not in by_id:
            _fail("unknown reference", t.individual_id,
                  f"test references unknown individual {t.individual_id!r}")


def _parent_ids(ind: Individual):
    return tuple(pid for pid in (ind.father_id, ind.mother_id) if pid is not None)


def founders(p: Pedigree) -> frozenset[str]:
    """Ids of the individuals without ancestors in the pedigree."""
    return p.founders()


def has_loop(p: Pedigree) -> bool:
    """True iff the marriage graph has a cycle (inbreeding or mating loop).

    The marriage graph has one node per individual plus one per parent pair,
    with edges parent-union and union-child; a component is loop-free exactly
    when it is a tree.
    """
    adjacency: dict[object, set[object]] = {ind.id: set() for ind in p.individuals}
    for ind in p.individuals:
        if ind.is_founder:
            continue
        union = ("union", ind.father_id, ind.mother_id)
        adjacency.setdefault(union, set())
        for other in (ind.father_id, ind.mother_id, ind.id):
            adjacency[union].add(other)
            adjacency[other].add(union)
    seen: set[object] = set()
    for start in adjacency:
        if start in seen:
            continue
        nodes = 0
        half_edges = 0
        stack = [start]
        seen.add(start)
        while stack:
            node = stack.pop()
            nodes += 1
            half_edges += len(adjacency[node])
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if half_edges // 2 >= nodes:
            return True
    return False


_INDIVIDUAL_KEYS = {"id", "sex", "father", "mother", "phenotype", "genotypes", "twin_group"}
_PHENOTYPE_KEYS = {"kind", "age"}
_TEST_KEYS = {"id", "result", "sensitivity", "specificity"}


def _reject_unknown(obj: dict, allowed: set, where: str):
    unknown = set(obj) - allowed
    if unknown:
        raise PedigreeParseError(f"unknown keys {sorted(unknown)} in {where}")


def _expect(value, types, where: str):
    if not isinstance(value, types):
        raise PedigreeParseError(f"unexpected type for {where}: {value!r}")
    return value


def pedigree_from_dict(doc: dict) -> Pedigree:
    """Build and validate a pedigree from an already-parsed JSON document."""
    _expect(doc, dict, "top-level document")
    _reject_unknown(doc, {"individuals", "tests"}, "top-level document")
    raw_inds = _expect(doc.get("individuals", []), list, '"individuals"')
    individuals = []
    for entry in raw_inds:
        _expect(entry, dict, "individual entry")
        _reject_unknown(entry, _INDIVIDUAL_KEYS, f"individual {entry.get('id')!r}")
        ind_id = _expect(entry.get("id"), str, "individual id")
        phenotype = None
        if entry.get("phenotype") is not None:
            ph = _expect(entry["phenotype"], dict, f"phenotype of {ind_id!r}")
            _reject_unknown(ph, _PHENOTYPE_KEYS, f"phenotype of {ind_id!r}")
            phenotype = PhenotypeEvent(
                kind=_expect(ph.get("kind"), str, f"phenotype kind of {ind_id!r}"),
                age=_expect(ph.get("age"), (int, float), f"phenotype age of {ind_id!r}"),
            )
        genotypes = entry.get("genotypes")
        if genotypes is None:
            constraint = ALL_GENOTYPES
        else:
            _expect(genotypes, list, f"genotypes of {ind_id!r}")
            constraint = frozenset(_expect(g, str, "genotype value") for g in genotypes)
        father = entry.get("father")
        mother = entry.get("mother")
        twin = entry.get("twin_group")
        individuals.append(
            Individual(
                id=ind_id,
                sex=_expect(entry.get("sex", "U"), str, f"sex of {ind_id!r}"),
                father_id=None if father is None else _expect(father, str, "father id"),
                mother_id=None if mother is None else _expect(mother, str, "mother id"),
                phenotype=phenotype,
                genotype_constraint=constraint,
                twin_group=None if twin is None else _expect(twin, str, "twin_group"),
            )
        )
    tests = []
    for entry in _expect(doc.get("tests", []), list, '"tests"'):
        _expect(entry, dict, "test entry")
        _reject_unknown(entry, _TEST_KEYS, "test entry")
        tests.append(
            GeneticTestResult(
                individual_id=_expect(entry.get("id"), str, "test id"),
                observed=_expect(entry.get("result"), str, "test result"),
                sensitivity=_expect(entry.get("sensitivity"), (int, float), "sensitivity"),
                specificity=_expect(entry.get("specificity"), (int, float), "specificity"),
            )
        )
    return Pedigree(tuple(individuals), tuple(tests))


def load_pedigree(source) -> Pedigree:
    """Load a pedigree from bytes, text, a path, or a readable binary stream."""
    if isinstance(source, Pedigree):
        return source
    if hasattr(source, "read"):
        raw = source.read()
    elif isinstance(source, (bytes, str)):
        raw = source
    else:
        with open(source, "rb") as fh:
            raw = fh.read()
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise PedigreeParseError(f"malformed pedigree JSON: {exc}") from exc
    return pedigree_from_dict(doc)


def serialize_pedigree(p: Pedigree) -> dict:
    """Dict form of a pedigree, parseable back by :func:`pedigree_from_dict`."""
    individuals = []
    for ind in p.individuals:
        entry = {
            "id": ind.id,
            "sex": ind.sex,
            "father": ind.father_id,
            "mother": ind.mother_id,
            "phenotype": None,
            "twin_group": ind.twin_group,
        }
        if ind.phenotype is not None:
            entry["phenotype"] = {"kind": ind.phenotype.kind, "age": ind.phenotype.age}
        if ind.genotype_constraint != ALL_GENOTYPES:
            entry["genotypes"] = sorted(ind.genotype_constraint)
        individuals.append(entry)
    doc = {"individuals": individuals}
    if p.tests:
        doc["tests"] = [
            {
                "id": t.individual_id,
                "result": t.observed,
                "sensitivity": t.sensitivity,
                "specificity": t.specificity,
            }
            for t in p.tests
        ]
    return doc
