"""Command-line front end for UnderlaySim"""
