"""
This module contains the vertex-ring components: singular functions, the
field ring, the free-field vertex algebra and its identity checks.
"""
