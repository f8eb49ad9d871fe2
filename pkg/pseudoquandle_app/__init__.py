"""Pseudoquandle workbench: normal-subgroup pseudoquandles, quandle families, kernels."""
