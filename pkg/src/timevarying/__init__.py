"""Kernel-smoothed time-varying estimation and bandwidth selection."""
