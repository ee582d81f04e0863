"""Scenario configuration and channel model"""
