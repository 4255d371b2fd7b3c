"""Executable security checks: exact enumeration at micro scale,
Monte Carlo games at desk scale."""

from .exact import (
    cea_transcript_distribution,
    cea_transcript_sd,
    composability_sd,
    exact_challenge_distribution,
    exact_challenge_sd,
    lhl_bound,
    naive_cea_sd,
    naive_challenge_sd,
    naive_composability_sd,
)
from .games import (
    BestGuessAdversary,
    BestGuessOtpHeAdversary,
    GameReport,
    HeAdversary,
    IkemAdversary,
    OmniscientAdversary,
    RandomGuessAdversary,
    RandomGuessHeAdversary,
    Transcript,
    cea_bound_check,
    composability_check,
    correctness_mc,
    mc_sigma,
    ot_bound_check,
    report_json,
    run_he_game,
    run_ikem_game,
    wilson_halfwidth,
)

__all__ = [
    "BestGuessAdversary",
    "BestGuessOtpHeAdversary",
    "GameReport",
    "HeAdversary",
    "IkemAdversary",
    "OmniscientAdversary",
    "RandomGuessAdversary",
    "RandomGuessHeAdversary",
    "Transcript",
    "cea_bound_check",
    "cea_transcript_distribution",
    "cea_transcript_sd",
    "composability_check",
    "composability_sd",
    "correctness_mc",
    "exact_challenge_distribution",
    "exact_challenge_sd",
    "lhl_bound",
    "mc_sigma",
    "naive_cea_sd",
    "naive_challenge_sd",
    "naive_composability_sd",
    "ot_bound_check",
    "report_json",
    "run_he_game",
    "run_ikem_game",
    "wilson_halfwidth",
]
