"""Random-beamforming scheduler for the secondary broadcast"""
