"""Experiment orchestration and statistical validation"""
