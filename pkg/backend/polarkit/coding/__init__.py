"""Numerical core: signal sets, kernels, spectra, search, channel, polar codes and Monte Carlo."""

from .channel import ChannelParams, hard_decision, likelihoods, make_rng, transmit
from .kernel import Kernel, Permutation, permutation_kernel, reed_solomon_kernel, standard_kernel
from .polar import PolarCodeConfig, StageAssignment, encode, genie_reliabilities, sc_decode, select_information_set
from .search import SearchResult, search_permutations
from .signal_set import SignalSet, psk
from .sim import SimResult, simulate_bad_channel, simulate_fer, simulate_good_channel
from .spectrum import DistanceSpectrum, SpectrumReport, report, union_bound

__all__ = [
    "ChannelParams",
    "DistanceSpectrum",
    "Kernel",
    "Permutation",
    "PolarCodeConfig",
    "SearchResult",
    "SignalSet",
    "SimResult",
    "SpectrumReport",
    "StageAssignment",
    "encode",
    "genie_reliabilities",
    "hard_decision",
    "likelihoods",
    "make_rng",
    "permutation_kernel",
    "psk",
    "reed_solomon_kernel",
    "report",
    "sc_decode",
    "search_permutations",
    "select_information_set",
    "simulate_bad_channel",
    "simulate_fer",
    "simulate_good_channel",
    "standard_kernel",
    "transmit",
    "union_bound",
]
