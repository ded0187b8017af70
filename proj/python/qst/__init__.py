"""Dissipative two-qutrit state-transfer simulator."""

from ._qst import (  # noqa: F401
    Factor,
    Level,
    SpaceLayout,
    __version__,
    annihilation,
    converge,
    default_config,
    embed,
    qutrit_transition,
    run_transfer,
    schedule,
    sweep_coupling,
    sweep_detuning,
    sweep_states,
    validate,
)
