"""Random sampling and dense linear algebra kernels"""
