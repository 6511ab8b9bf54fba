# Szegő limit theorem toolkit for Toeplitz-like operators on the Drury-Arveson space
__version__ = "0.1.0"
