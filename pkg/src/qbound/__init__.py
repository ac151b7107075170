"""qbound: enumerators, generalized-stabilizer spectra, and LP/SDP size
bounds for entanglement-assisted codeword stabilized quantum codes."""

__version__ = "0.1.0"
