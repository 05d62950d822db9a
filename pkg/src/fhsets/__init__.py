"""Construct and verify frequency-hopping sequence sets with optimal Hamming correlation."""

from .bounds import classify, classify_parameters, lempel_greenberger, peng_fan, simplified_peng_fan
from .constructions import (bncdp_from_cyclotomic, cdm_for, concatenate_fold, construct_3p, construct_3v,
                            construct_tv, construct_vw, construction_a, cyclotomic_bncrdp,
                            expand_bncrdp_by_cdm, expand_fhs_set_by_cdm, fill_bncrdp_with_bncdp,
                            pipeline_qv)
from .correlation import Fhs, FhsSet, hamming_correlation, set_correlation
from .designs import (BlockFamily, Bncdp, Bncrdp, Cdm, bncdp_to_fhs_set, fhs_set_to_bncdp, verify_bncdp,
                      verify_bncrdp, verify_cdm, verify_cdp)

__version__ = "0.1.0"

__all__ = [
    "BlockFamily", "Bncdp", "Bncrdp", "Cdm", "Fhs", "FhsSet",
    "bncdp_from_cyclotomic", "bncdp_to_fhs_set", "cdm_for", "classify", "classify_parameters",
    "concatenate_fold", "construct_3p", "construct_3v", "construct_tv", "construct_vw", "construction_a",
    "cyclotomic_bncrdp", "expand_bncrdp_by_cdm", "expand_fhs_set_by_cdm", "fhs_set_to_bncdp",
    "fill_bncrdp_with_bncdp", "hamming_correlation", "lempel_greenberger", "peng_fan", "pipeline_qv",
    "set_correlation", "simplified_peng_fan", "verify_bncdp", "verify_bncrdp", "verify_cdm", "verify_cdp",
]
