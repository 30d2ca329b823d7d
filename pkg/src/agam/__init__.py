"""Gravity-assist and aero-gravity-assist maneuvers in the Sun-planet CRTBP."""
