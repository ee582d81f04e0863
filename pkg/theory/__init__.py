"""Closed-form bounds, constants and oracles"""
