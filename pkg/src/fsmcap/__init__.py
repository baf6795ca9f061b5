"""Exact probabilistic-automaton gadgets and finite-state channel capacity
experiments."""

__version__ = "0.1.0"

from .pfa import (BudgetError, FreezeReset, Pfa, PfaError, SearchResult,
                  brute_force_value, detect_freeze_reset, emptiness_semidecide,
                  evolve, frac, gamma, make_pfa, reach_mass, reach_prob,
                  reduce_extended_word, validate_pfa, value)
from .gadgets import (GadgetError, SigmaCode, SigmaError, build_B_p, build_C_p,
                      build_D_Ay, build_D_xy, build_family_member,
                      dxy_block_word, dxy_reach_closed_form, sigma_decode,
                      sigma_encode)
from .witness import (ClosedFormMismatch, WitnessError, WitnessReport,
                      c_epsilon, solve_b, synthesize_word, witness_lengths,
                      zeta_tail_bound)
from .fsmc import (Fsmc, FsmcError, SequenceDist, build_V, joint_seq_dist,
                   sample, validate_fsmc)
from .capacity import (BaResult, BracketBudget, CapacityBracket, CapacityError,
                       ControlSchedule, DiscreteChannel, SpectrumSample,
                       achievable_rate, binary_entropy, blahut_arimoto, bsc,
                       capacity_bracket, converse_check, entropy,
                       induced_block_channel, information_spectrum,
                       mutual_information, spectrum_concentration_demo,
                       stability_schedule)
