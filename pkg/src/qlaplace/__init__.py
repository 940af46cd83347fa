"""q-special functions of Laplace type and the classification of q-difference equations."""
__version__ = "0.1.0"
