"""QKD multiplexed with a GPON on one fiber: through-splitter vs splitter-bypass."""

from .analysis import (
    SnrReport,
    calibrate_ratio,
    k_from_ratio,
    multiplier_k,
    snr_bypass,
    snr_report,
    snr_through,
)
from .keyrate import (
    ChannelModel,
    DecoyParams,
    KeyRateResult,
    binary_entropy,
    budget_to_channel,
    decoy_bounds,
    gain_and_qber,
    secure_key_rate,
)
from .noise import (
    ClassicalSource,
    DetectorSpec,
    NoiseBudget,
    backward_raman_power,
    forward_raman_power,
    noise_budget,
)
from .quantities import CountRate, DecibelLoss, OpticalPower, Wavelength
from .topology import (
    Architecture,
    Direction,
    FiberSpan,
    SplitterSpec,
    Topology,
    WdmElement,
    classical_path_loss,
    quantum_path_loss,
    splitter_loss,
    validate,
)

__version__ = "0.1.0"
