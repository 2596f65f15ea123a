"""Key-recovery attacks built on square-code dimensions."""

from .bbcrs import (
    BbcrsCrack,
    apply_pair,
    attack_bbcrs,
    bbcrs_crack_decrypt,
    bbcrs_supported,
    find_lambda_perp,
    recover_hidden_code,
    relation_rank_check,
    valid_pair,
)
from .bl import BlCrack, attack_bl, bl_crack_decrypt
from .common import AttackFailure, AttackStats, NotGRSError, RateTooHighError, UnsupportedParameters
from .filtration import SubcodeChain, attack_filtration, build_chain, filtration_step, recover_grs, support_from_end_words
from .wieschebrink import WieschebrinkCrack, attack_wieschebrink, wieschebrink_crack_decrypt

__all__ = [
    "AttackFailure",
    "AttackStats",
    "NotGRSError",
    "RateTooHighError",
    "UnsupportedParameters",
    "SubcodeChain",
    "attack_filtration",
    "build_chain",
    "filtration_step",
    "recover_grs",
    "support_from_end_words",
    "WieschebrinkCrack",
    "attack_wieschebrink",
    "wieschebrink_crack_decrypt",
    "BlCrack",
    "attack_bl",
    "bl_crack_decrypt",
    "BbcrsCrack",
    "attack_bbcrs",
    "bbcrs_crack_decrypt",
    "bbcrs_supported",
    "find_lambda_perp",
    "recover_hidden_code",
    "valid_pair",
    "apply_pair",
    "relation_rank_check",
]
