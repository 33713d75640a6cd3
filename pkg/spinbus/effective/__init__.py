"""Closed-form effective model of the nuclear pair."""
