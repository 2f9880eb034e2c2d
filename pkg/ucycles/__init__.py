__name__ = "ucycles"
__version__ = "0.0.1"
__all__ = ("core", "classes", "engine", "verifier", "cli")
