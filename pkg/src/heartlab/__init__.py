"""Saddle connections near a heart polycycle: location, arithmetic invariants and graph classification."""
from .arithmetic import (
    DiophantineReport, LatticeWitness, NoViolationsBeyond, ViolationsFound, continued_fraction,
    diophantine_check, equiv_mod_lattice, measure_experiment,
)
from .bifurcations import check_monotone_d, locate_EI, locate_LE, locate_LI, progression_fit, scan
from .errors import (
    BracketError, ConsistencyError, DepthError, DomainError, HeartlabError, ParamError,
    ResonanceError,
)
from .events import EI, LE, LI, ConnectionEvent, MarkedSequence
from .families import BUILTIN, builtin
from .kernel import DEFAULT_PRECISION, context, required_precision
from .lmf import (
    LmfGraph, Regime, WeaklyEquivalent, classify_pair, dumps, isotopic, loads, surgery, template,
    validate,
)
from .model import Derived, Family, FamilyParams, derive
from .orderings import lemma1_experiment, lemma3_extension, order_equivalent, word_of

__version__ = "0.1.0"
