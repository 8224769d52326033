"""Preference families: vNM power, exponential KM, homogeneous EZ."""

from collective_fund.prefs.ez import (
    EZPreferences,
    ez_deterministic_value,
    ez_satisfaction,
    ez_step,
)
from collective_fund.prefs.funding import FundingMode, adequacy_funding_cost, funding_cost
from collective_fund.prefs.km import (
    KMPreferences,
    calibrate_a,
    gain_from_satisfaction,
    km_gain,
    satisfaction,
    satisfaction_equivalent,
    utility_u,
)
from collective_fund.prefs.power import signed_power, spow
from collective_fund.prefs.schedules import Schedules
from collective_fund.prefs.vnm import VNMPreferences

PreferenceSpec = KMPreferences | VNMPreferences | EZPreferences

__all__ = [
    "EZPreferences",
    "FundingMode",
    "KMPreferences",
    "PreferenceSpec",
    "Schedules",
    "VNMPreferences",
    "adequacy_funding_cost",
    "calibrate_a",
    "ez_deterministic_value",
    "ez_satisfaction",
    "ez_step",
    "funding_cost",
    "gain_from_satisfaction",
    "km_gain",
    "satisfaction",
    "satisfaction_equivalent",
    "signed_power",
    "spow",
    "utility_u",
]
