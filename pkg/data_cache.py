"""
In-process memo table for intersection numbers.
One cache is owned by each analysis so repeated pairs (the same branch against
the same polar, the same divisor against itself under several identities) are
computed once.
"""

import threading


def poly_key(f):
    """Hashable canonical form of a Poly: its domain and sorted native terms."""
    return (str(f.get_domain()), tuple(sorted(f.as_dict(native=True).items())))


def pair_key(f, g):
    """Key for an unordered pair of polynomials."""
    a, b = poly_key(f), poly_key(g)
    return (a, b) if a <= b else (b, a)


class IntersectionCache:
    """Thread-safe dictionary keyed on unordered polynomial pairs."""

    def __init__(self):
        self._entries = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        """Cached value, or None if the key was never stored."""
        with self._lock:
            value = self._entries.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def set(self, key, value):
        with self._lock:
            self._entries[key] = value

    def __len__(self):
        with self._lock:
            return len(self._entries)
