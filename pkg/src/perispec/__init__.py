"""Peripheral spectra of generalized operator products and their preservers."""
