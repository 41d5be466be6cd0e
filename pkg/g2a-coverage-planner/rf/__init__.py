"""
RF module for the G2A Coverage Planner.

This module provides:
- TR 36.777 aerial channel model (LOS probability, mixed path loss)
- 3D directional antenna gain and beam codebooks
- Received-power link budget with per-station precomputation
"""

from rf.antenna import (
    AntennaModel,
    BeamConfig,
    BeamPatternCodebook,
    antenna_gain,
    boresight_offsets,
    heading_deg,
    wrap_angle,
)
from rf.channel import (
    ChannelParams,
    load_channel_table,
    los_probability,
    path_loss,
    path_loss_los,
    path_loss_nlos,
)
from rf.link_budget import RadioContext, StationLink, build_links, received_power

__all__ = [
    "AntennaModel",
    "BeamConfig",
    "BeamPatternCodebook",
    "ChannelParams",
    "RadioContext",
    "StationLink",
    "antenna_gain",
    "boresight_offsets",
    "build_links",
    "heading_deg",
    "load_channel_table",
    "los_probability",
    "path_loss",
    "path_loss_los",
    "path_loss_nlos",
    "received_power",
    "wrap_angle",
]
