"""
Received power per voxel.

    P(v) = P_T + G(φ, ϕ) - PL(d_2D, h_t)      [dBm]

`StationLink` precomputes the beam-independent part (P_T - PL, headings and
elevations) for one station over a voxel grid, so an optimizer only pays for
the lobe test when it changes Ψ, Φ or Θ.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from config import config
from errors import SingularGeometry
from rf.antenna import AntennaModel, BeamConfig, antenna_gain, boresight_offsets, in_main_lobe, wrap_angle
from rf.channel import ChannelParams, path_loss


class RadioContext(BaseModel):
    """Scenario-wide radio constants."""

    model_config = ConfigDict(frozen=True)

    transmit_power_dbm: float = Field(default_factory=lambda: config.DEFAULT_TRANSMIT_POWER_DBM)
    channel: ChannelParams = Field(default_factory=ChannelParams.load)
    antenna: AntennaModel = Field(default_factory=AntennaModel)


def _radio(scenario) -> RadioContext:
    """Accept a Scenario (via its `.radio`) or a RadioContext."""
    return getattr(scenario, "radio", scenario)


def received_power(station, beam: BeamConfig, voxel, scenario) -> float:
    """
    Received power (dBm) of one beam at one voxel.

    Args:
        station: BaseStation
        beam: Beam configuration
        voxel: (x, y, z) point
        scenario: Scenario or RadioContext

    Raises:
        SingularGeometry: voxel coincides with the station
    """
    radio = _radio(scenario)
    phi, theta = boresight_offsets(station, beam, voxel)
    delta = np.asarray(voxel, dtype=float) - station.position
    pl = path_loss(float(np.hypot(delta[0], delta[1])), abs(float(delta[2])), radio.channel)
    gain = antenna_gain(beam, phi, theta, radio.antenna)
    return float(radio.transmit_power_dbm + gain - pl)


@dataclass(frozen=True)
class StationLink:
    """Beam-independent link terms from one station to every voxel of a grid."""

    station_id: int
    base_power: np.ndarray = field(repr=False)
    heading: np.ndarray = field(repr=False)
    elevation: np.ndarray = field(repr=False)
    antenna: AntennaModel = field(default_factory=AntennaModel)

    @classmethod
    def build(cls, station, centers: np.ndarray, scenario) -> "StationLink":
        """
        Precompute P_T - PL, headings and elevations for all voxel centers.

        Raises:
            SingularGeometry: a voxel center coincides with the station
        """
        radio = _radio(scenario)
        delta = np.asarray(centers, dtype=float) - station.position
        d_2d = np.hypot(delta[:, 0], delta[:, 1])
        if np.any((d_2d == 0.0) & (delta[:, 2] == 0.0)):
            raise SingularGeometry(f"A voxel center coincides with station {station.id}")

        pl = path_loss(d_2d, np.abs(delta[:, 2]), radio.channel)
        link = cls(
            station_id=station.id,
            base_power=np.asarray(radio.transmit_power_dbm - pl, dtype=float),
            heading=np.arctan2(delta[:, 1], delta[:, 0]),
            elevation=np.arctan2(delta[:, 2], d_2d),
            antenna=radio.antenna,
        )
        for array in (link.base_power, link.heading, link.elevation):
            array.setflags(write=False)
        return link

    @property
    def count(self) -> int:
        return int(self.base_power.shape[0])

    def offsets(self, tilt: float, azimuth: float):
        """(φ, ϕ) arrays for a boresight at (azimuth, tilt) in degrees."""
        phi = wrap_angle(self.heading - np.radians(azimuth))
        theta = wrap_angle(self.elevation - np.radians(tilt))
        return np.atleast_1d(phi), np.atleast_1d(theta)

    def received_power(self, beam: BeamConfig) -> np.ndarray:
        """Received power (dBm) of `beam` at every voxel."""
        phi, theta = self.offsets(beam.tilt, beam.azimuth)
        return self.base_power + antenna_gain(beam, phi, theta, self.antenna)

    def coverage_mask(
        self,
        h_hpbw: float,
        v_hpbw: float,
        tilt: float,
        azimuth: float,
        tau: float,
    ) -> np.ndarray:
        """
        Voxels where P ≥ τ for a beam given by its raw parameters.

        Equivalent to `received_power(beam) >= tau` with the gain reduced to
        its two levels.
        """
        main_dbi = 10.0 * np.log10(self.antenna.main_lobe_gain(h_hpbw, v_hpbw))
        phi, theta = self.offsets(tilt, azimuth)
        inside = in_main_lobe(h_hpbw, v_hpbw, phi, theta)
        gain = np.where(inside, main_dbi, self.antenna.side_lobe_dbi)
        return self.base_power + gain >= tau

    def beam_mask(self, beam: BeamConfig, tau: float) -> np.ndarray:
        return self.coverage_mask(beam.h_hpbw, beam.v_hpbw, beam.tilt, beam.azimuth, tau)

    def side_lobe_mask(self, tau: float) -> np.ndarray:
        """Voxels covered even by the side lobe (beam-independent)."""
        return self.base_power + self.antenna.side_lobe_dbi >= tau


def build_links(stations, centers: np.ndarray, scenario, station_ids: Optional[list] = None):
    """StationLink per station id, for all (or the listed) stations."""
    wanted = set(station_ids) if station_ids is not None else None
    return {
        s.id: StationLink.build(s, centers, scenario)
        for s in stations
        if wanted is None or s.id in wanted
    }
