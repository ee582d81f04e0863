"""Threshold-based user selection for the secondary MAC"""
