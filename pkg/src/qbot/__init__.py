"""Reversible-logic robot controller and grid-world episode runner.

The pieces, bottom up: an exact simulator for X-family circuits
(:mod:`qbot.core`), multi-controlled-NOT lowering (:mod:`qbot.decompose`),
truth-table-to-circuit synthesis plus actuator decoding (:mod:`qbot.synth`),
a 2-D occupancy-grid world (:mod:`qbot.grid`), an episode driver with
human-in-the-loop ask handling and JSONL traces (:mod:`qbot.session`), a
line-JSON protocol server (:mod:`qbot.service`) and the CLI
(:mod:`qbot.cli`).
"""

from .core import (
    BasisState,
    Circuit,
    Gate,
    RegisterMap,
    StateVector,
    apply_gate,
    as_unitary,
    basis_permutation,
    ccx,
    cx,
    measure_all,
    mcx,
    new_state,
    run_basis,
    run_statevector,
    x,
)
from .decompose import DecompositionPlan, decompose_mcx, lower_circuit, verify_equivalence
from .errors import QbotError
from .grid import Action, GridMap, Heading, Pose, Terminal, apply_action, interpret, load_map, render, resolve_ask, sense
from .session import AskRequest, Episode, EpisodeConfig, EpisodeTrace, TraceRecord, replay, run_to_completion
from .synth import (
    ControlOutcome,
    Direction,
    MotorState,
    SensorWord,
    TruthTable,
    build_controller,
    builtin_table,
    evaluate,
    format_table_iv,
    synthesize,
)

__version__ = "0.1.0"
