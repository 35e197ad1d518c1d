"""Colimits derived from locally cartesian closed structure and a subobject
classifier, on finite presheaf toposes."""
__version__ = "0.1.0"
