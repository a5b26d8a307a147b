"""Worked example families used in documentation, demos and tests.

Two builders are provided.  ``looped_family`` is a twelve-member pedigree
whose two founder couples are linked through both of their grandchildren's
marriages, so the family graph contains a mating loop; it exercises the exact
engine on a structure where naive peeling would have to cut the loop.
``counseling_family`` is a six-member family observed at increasing levels of
detail, numbered stage 1 (bare structure) through stage 6; it follows a
counselee whose carrier probability rises and falls as relatives' histories
are added, including a drop when a second affected relative offers a
competing explanation for the family's cancers.
"""

from __future__ import annotations

from .pedigree import Individual, Pedigree, PhenotypeEvent

__all__ = ["looped_family", "counseling_family", "COUNSELING_STAGES"]

COUNSELING_STAGES = (1, 2, 3, 4, 5, 6)


def _affected(age: float) -> PhenotypeEvent:
    return PhenotypeEvent("affected", age)


def _unaffected(age: float) -> PhenotypeEvent:
    return PhenotypeEvent("unaffected", age)


def looped_family() -> Pedigree:
    """Twelve individuals, two founder couples joined by two marriages.

    Founders 1 and 2 have sons 5 and 6; founders 3 and 4 have daughters 7, 8
    and 9.  The marriages 5-8 and 6-7 close a loop between the two branches.
    Individual 2 and both granddaughters 10 and 11 are affected, so the
    mutation most plausibly entered through 2 and descended through her sons.
    """
    return Pedigree(
        (
            Individual("1", sex="M"),
            Individual("2", sex="F", phenotype=_affected(51.0)),
            Individual("3", sex="M"),
            Individual("4", sex="F", phenotype=_unaffected(80.0)),
            Individual("5", sex="M", father_id="1", mother_id="2"),
            Individual("6", sex="M", father_id="1", mother_id="2"),
            Individual("7", sex="F", father_id="3", mother_id="4", phenotype=_unaffected(62.0)),
            Individual("8", sex="F", father_id="3", mother_id="4", phenotype=_unaffected(60.0)),
            Individual("9", sex="F", father_id="3", mother_id="4", phenotype=_unaffected(60.0)),
            Individual("10", sex="F", father_id="5", mother_id="8", phenotype=_affected(33.0)),
            Individual("11", sex="F", father_id="6", mother_id="7", phenotype=_affected(33.0)),
            Individual("12", sex="F", father_id="6", mother_id="7", phenotype=_unaffected(37.0)),
        )
    )


def counseling_family(stage: int = 6) -> Pedigree:
    """Six individuals; ``stage`` selects how much history is observed.

    The counselee is individual 4, an untested, unphenotyped daughter.

    ====== ==========================================================
    stage  observations
    ====== ==========================================================
    1      structure only, everyone unobserved
    2      mother 2 affected at 51
    3      stage 2, plus sister 3 unaffected at 61
    4      stage 3, plus niece 6 affected at 30
    5      stage 4, plus the niece's father 5 affected at 72
    6      stage 5, minus sister 3's unaffected record
    ====== ==========================================================
    """
    if stage not in COUNSELING_STAGES:
        raise ValueError(f"stage must be in {COUNSELING_STAGES}, got {stage!r}")
    mother = _affected(51.0) if stage >= 2 else None
    sister = _unaffected(61.0) if 3 <= stage <= 5 else None
    niece = _affected(30.0) if stage >= 4 else None
    niece_father = _affected(72.0) if stage >= 5 else None
    return Pedigree(
        (
            Individual("1", sex="M"),
            Individual("2", sex="F", phenotype=mother),
            Individual("3", sex="F", father_id="1", mother_id="2", phenotype=sister),
            Individual("4", sex="F", father_id="1", mother_id="2"),
            Individual("5", sex="M", phenotype=niece_father),
            Individual("6", sex="F", father_id="5", mother_id="3", phenotype=niece),
        )
    )
