"""Extension machinery at desk scale: Galois rings, twisted products, splittings."""

from .conjugator import ConjugatorResult, random_split_subgroup, split_conjugator
from .extensions import (
    Cocycle2, ExtensionInstance, FiniteGroup, GModule, NoSplitting, Splitting, TwistedProduct,
    build_twisted_product, generating_pairs, gl2d_algebra_extension, matrix_extension,
    sl2_witt_extension, splitting_search, verify_group_axioms, witt_cocycle,
)
from .galoisring import GaloisRingParams, GRElem, gr_teichmuller
from .normal import conjugacy_classes, normal_subgroups, verify_normal_subgroup_lemma

GaloisRingElem = GRElem

__all__ = [
    "Cocycle2", "ConjugatorResult", "ExtensionInstance", "FiniteGroup", "GModule", "GRElem",
    "GaloisRingElem", "GaloisRingParams", "NoSplitting", "Splitting", "TwistedProduct",
    "build_twisted_product", "conjugacy_classes", "generating_pairs", "gl2d_algebra_extension",
    "gr_teichmuller", "matrix_extension", "normal_subgroups", "random_split_subgroup",
    "sl2_witt_extension", "split_conjugator", "splitting_search", "verify_group_axioms",
    "verify_normal_subgroup_lemma", "witt_cocycle",
]
