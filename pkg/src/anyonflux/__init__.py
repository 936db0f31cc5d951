"""Observables of abelian anyons from 2-cohomotopical flux quantization.

Submodules:

links     framed link diagrams, crossing invariants, Wilson-loop expectation values
algebra   quantum-torus observable algebra and the SL(2, Z) action
modular   level-K clock/shift representations and modular intertwiners
braid     Artin braid words, abelian phases, closures
bands     Hopf degree / Chern number of normalized 2-band Bloch maps
"""

from .algebra import SL2Z, AlgebraElement, GroupWord, mcg_act, mul, mul_word, stabilize
from .bands import BlochMap, TwoBandModel, chern_number, hopf_degree, sample_model
from .braid import BraidWord, abelian_phase, closure, exponent_sum, parse_braid, permutation
from .links import (
    Crossing,
    FramedLinkDiagram,
    LinkInvariants,
    expectation,
    invariants,
    mirror,
    parse_gauss_code,
    parse_link,
    parse_link_text,
)
from .modular import (
    Level,
    LevelRep,
    Sector,
    build_rep,
    central_characters,
    find_intertwiner,
    modular_relations,
    rep_word,
)

__version__ = "0.1.0"

__all__ = [
    "SL2Z", "AlgebraElement", "GroupWord", "mcg_act", "mul", "mul_word", "stabilize",
    "BlochMap", "TwoBandModel", "chern_number", "hopf_degree", "sample_model",
    "BraidWord", "abelian_phase", "closure", "exponent_sum", "parse_braid", "permutation",
    "Crossing", "FramedLinkDiagram", "LinkInvariants", "expectation", "invariants",
    "mirror", "parse_gauss_code", "parse_link", "parse_link_text",
    "Level", "LevelRep", "Sector", "build_rep", "central_characters",
    "find_intertwiner", "modular_relations", "rep_word",
]
